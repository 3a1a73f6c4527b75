#include "fincov/space.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace fincov {

namespace {

Budget& mutable_budget() {
  static Budget b;
  return b;
}

}  // namespace

const Budget& budget() { return mutable_budget(); }
void set_budget(const Budget& b) { mutable_budget() = b; }

FiniteSpace FiniteSpace::from_opens(int n, std::vector<PointSet> opens) {
  if (n < 0 || n > PointSet::kMaxPoints) {
    throw NotATopology("point count " + std::to_string(n) + " out of range");
  }
  if (n > budget().max_space_points) {
    throw BudgetExceeded("space has " + std::to_string(n) + " points, cap is " +
                         std::to_string(budget().max_space_points));
  }
  const PointSet carrier = PointSet::full(n);
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  for (PointSet o : opens) {
    if (!o.subset_of(carrier)) throw NotATopology("open set " + o.str() + " leaves the carrier");
  }
  auto has = [&](PointSet s) { return std::binary_search(opens.begin(), opens.end(), s); };
  if (!has(PointSet{})) throw NotATopology("empty set missing");
  if (!has(carrier)) throw NotATopology("carrier missing");
  for (std::size_t i = 0; i < opens.size(); ++i) {
    for (std::size_t j = i + 1; j < opens.size(); ++j) {
      if (!has(opens[i] | opens[j])) {
        throw NotATopology("union of " + opens[i].str() + " and " + opens[j].str() + " missing");
      }
      if (!has(opens[i] & opens[j])) {
        throw NotATopology("intersection of " + opens[i].str() + " and " + opens[j].str() +
                           " missing");
      }
    }
  }
  std::vector<PointSet> nbhd(static_cast<std::size_t>(n), carrier);
  for (PointSet o : opens) {
    o.for_each([&](int x) { nbhd[static_cast<std::size_t>(x)] &= o; });
  }
  return FiniteSpace(std::move(nbhd));
}

FiniteSpace FiniteSpace::from_neighbourhoods(std::vector<PointSet> neighbourhoods) {
  const int n = static_cast<int>(neighbourhoods.size());
  if (n > PointSet::kMaxPoints) throw BudgetExceeded("more than 64 points");
  const PointSet carrier = PointSet::full(n);
  for (int x = 0; x < n; ++x) {
    PointSet u = neighbourhoods[static_cast<std::size_t>(x)];
    if (!u.contains(x) || !u.subset_of(carrier)) {
      throw NotATopology("neighbourhood of " + std::to_string(x) + " is " + u.str());
    }
    u.for_each([&](int y) {
      if (!neighbourhoods[static_cast<std::size_t>(y)].subset_of(u)) {
        throw NotATopology("neighbourhoods of " + std::to_string(x) + " and " +
                           std::to_string(y) + " are not nested");
      }
    });
  }
  return FiniteSpace(std::move(neighbourhoods));
}

bool FiniteSpace::is_open(PointSet s) const {
  bool open = true;
  s.for_each([&](int x) { open = open && nbhd_[static_cast<std::size_t>(x)].subset_of(s); });
  return open;
}

PointSet FiniteSpace::open_hull(PointSet s) const {
  PointSet out;
  s.for_each([&](int x) { out |= nbhd_[static_cast<std::size_t>(x)]; });
  return out;
}

PointSet FiniteSpace::interior(PointSet s) const {
  PointSet out;
  for (int x = 0; x < size(); ++x) {
    if (nbhd_[static_cast<std::size_t>(x)].subset_of(s)) out |= PointSet::singleton(x);
  }
  return out;
}

PointSet FiniteSpace::closure(PointSet s) const {
  PointSet out;
  for (int x = 0; x < size(); ++x) {
    if (nbhd_[static_cast<std::size_t>(x)].meets(s)) out |= PointSet::singleton(x);
  }
  return out;
}

std::vector<PointSet> FiniteSpace::opens() const {
  std::unordered_set<std::uint64_t> seen{0};
  std::vector<PointSet> out{PointSet{}};
  for (PointSet u : nbhd_) {
    const std::size_t count = out.size();
    for (std::size_t k = 0; k < count; ++k) {
      PointSet o = out[k] | u;
      if (seen.insert(o.bits()).second) {
        out.push_back(o);
        if (out.size() > budget().max_enumerated_covers) {
          throw BudgetExceeded("open-set family exceeds enumeration cap");
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointSet> FiniteSpace::closed_sets() const {
  std::vector<PointSet> out;
  for (PointSet o : opens()) out.push_back(carrier() - o);
  std::sort(out.begin(), out.end());
  return out;
}

FiniteSpace sierpinski() {
  return FiniteSpace::from_opens(2, {PointSet{}, PointSet{1}, PointSet{0, 1}});
}

FiniteSpace discrete_space(int n) {
  std::vector<PointSet> nbhd;
  for (int x = 0; x < n; ++x) nbhd.push_back(PointSet::singleton(x));
  return FiniteSpace::from_neighbourhoods(std::move(nbhd));
}

FiniteSpace indiscrete_space(int n) {
  return FiniteSpace::from_neighbourhoods(std::vector<PointSet>(static_cast<std::size_t>(n),
                                                                PointSet::full(n)));
}

std::vector<FiniteSpace> all_topologies(int n) {
  if (n > 5) throw BudgetExceeded("topology enumeration is limited to 5 points");
  std::vector<FiniteSpace> out;
  std::vector<PointSet> nbhd(static_cast<std::size_t>(n));
  const PointSet carrier = PointSet::full(n);
  // Each U_x is {x} plus a subset of the other points; keep the transitive choices.
  auto rec = [&](auto&& self, int x) -> void {
    if (x == n) {
      for (int a = 0; a < n; ++a) {
        bool ok = true;
        nbhd[static_cast<std::size_t>(a)].for_each([&](int b) {
          ok = ok && nbhd[static_cast<std::size_t>(b)].subset_of(nbhd[static_cast<std::size_t>(a)]);
        });
        if (!ok) return;
      }
      out.push_back(FiniteSpace::from_neighbourhoods(nbhd));
      return;
    }
    for_each_subset(carrier - PointSet::singleton(x), [&](PointSet rest) {
      nbhd[static_cast<std::size_t>(x)] = rest | PointSet::singleton(x);
      self(self, x + 1);
    });
  };
  rec(rec, 0);
  return out;
}

PointSet closure(const FiniteSpace& space, PointSet s) { return space.closure(s); }
PointSet interior(const FiniteSpace& space, PointSet s) { return space.interior(s); }

PointSet regular_open_extension(const FiniteSpace& space, PointSet s) {
  return space.interior(space.closure(s));
}

bool is_regular_open(const FiniteSpace& space, PointSet s) {
  return regular_open_extension(space, s) == s;
}

bool is_regular(const FiniteSpace& space) {
  // The smallest open sets around x and around C are U_x and the open hull
  // of C, so separation happens iff those two are disjoint.
  for (PointSet c : space.closed_sets()) {
    const PointSet hull = space.open_hull(c);
    for (int x = 0; x < space.size(); ++x) {
      if (c.contains(x)) continue;
      if (space.neighbourhood(x).meets(hull)) return false;
    }
  }
  return true;
}

bool is_relatively_open(const FiniteSpace& space, PointSet s, PointSet t) {
  if (!t.subset_of(s)) return false;
  bool ok = true;
  t.for_each([&](int x) { ok = ok && (space.neighbourhood(x) & s).subset_of(t); });
  return ok;
}

PointSet relative_closure(const FiniteSpace& space, PointSet s, PointSet t) {
  return space.closure(t) & s;
}

PointSet relative_interior(const FiniteSpace& space, PointSet s, PointSet t) {
  PointSet out;
  (t & s).for_each([&](int x) {
    if ((space.neighbourhood(x) & s).subset_of(t)) out |= PointSet::singleton(x);
  });
  return out;
}

std::vector<PointSet> components(const FiniteSpace& space) {
  std::vector<PointSet> out;
  PointSet left = space.carrier();
  while (!left.empty()) {
    PointSet comp = PointSet::singleton(left.first());
    while (true) {
      // Grow by neighbourhoods of members and by points whose neighbourhood meets it.
      PointSet next = space.open_hull(comp) | space.closure(comp);
      if (next == comp) break;
      comp = next;
    }
    out.push_back(comp);
    left -= comp;
  }
  return out;
}

PointSet Subspace::to_ambient(PointSet local) const {
  PointSet out;
  local.for_each([&](int k) { out |= PointSet::singleton(embedding[static_cast<std::size_t>(k)]); });
  return out;
}

PointSet Subspace::to_local(PointSet ambient) const {
  PointSet out;
  for (std::size_t k = 0; k < embedding.size(); ++k) {
    if (ambient.contains(embedding[k])) out |= PointSet::singleton(static_cast<int>(k));
  }
  return out;
}

Subspace subspace(const FiniteSpace& space, PointSet a) {
  std::vector<int> embedding = (a & space.carrier()).points();
  std::vector<PointSet> nbhd;
  Subspace proto{discrete_space(0), embedding};
  for (int x : embedding) nbhd.push_back(proto.to_local(space.neighbourhood(x) & a));
  return Subspace{FiniteSpace::from_neighbourhoods(std::move(nbhd)), std::move(embedding)};
}

int ProductSpace::coordinate(int point, int factor) const {
  const auto i = static_cast<std::size_t>(factor);
  return (point / strides_[i]) % factors_[i].size();
}

int ProductSpace::point(const std::vector<int>& coords) const {
  int p = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) p += coords[i] * strides_[i];
  return p;
}

std::vector<int> ProductSpace::coordinates(int point) const {
  std::vector<int> out;
  for (int i = 0; i < factor_count(); ++i) out.push_back(coordinate(point, i));
  return out;
}

PointSet ProductSpace::pullback(int factor, PointSet s) const {
  PointSet out;
  s.for_each([&](int v) {
    out |= fibres_[static_cast<std::size_t>(factor)][static_cast<std::size_t>(v)];
  });
  return out;
}

PointSet ProductSpace::project(PointSet s, int factor) const {
  PointSet out;
  s.for_each([&](int p) { out |= PointSet::singleton(coordinate(p, factor)); });
  return out;
}

PointSet ProductSpace::box(const std::vector<PointSet>& sides) const {
  PointSet out = space_.carrier();
  for (std::size_t i = 0; i < sides.size(); ++i) out &= pullback(static_cast<int>(i), sides[i]);
  return out;
}

std::vector<PointSet> ProductSpace::sides(PointSet s) const {
  std::vector<PointSet> out;
  for (int i = 0; i < factor_count(); ++i) out.push_back(project(s, i));
  return out;
}

bool ProductSpace::is_box(PointSet s) const { return s.empty() || box(sides(s)) == s; }

ProductSpace ProductSpace::subproduct(const std::vector<int>& indices) const {
  std::vector<FiniteSpace> fs;
  for (int i : indices) fs.push_back(factors_[static_cast<std::size_t>(i)]);
  if (fs.empty()) fs.push_back(discrete_space(1));
  return product(fs);
}

PointSet ProductSpace::project_to(PointSet s, const std::vector<int>& indices) const {
  const ProductSpace sub = subproduct(indices);
  PointSet out;
  s.for_each([&](int p) {
    std::vector<int> c;
    for (int i : indices) c.push_back(coordinate(p, i));
    if (c.empty()) c.push_back(0);
    out |= PointSet::singleton(sub.point(c));
  });
  return out;
}

PointSet ProductSpace::cylinder(PointSet t, const std::vector<int>& indices) const {
  const ProductSpace sub = subproduct(indices);
  PointSet out;
  for (int p = 0; p < space_.size(); ++p) {
    std::vector<int> c;
    for (int i : indices) c.push_back(coordinate(p, i));
    if (c.empty()) c.push_back(0);
    if (t.contains(sub.point(c))) out |= PointSet::singleton(p);
  }
  return out;
}

ProductSpace product(const std::vector<FiniteSpace>& factors) {
  if (factors.empty()) throw EmptyInput("product of no factors");
  long total = 1;
  for (const auto& f : factors) {
    total *= f.size();
    if (total > budget().max_product_points || total > PointSet::kMaxPoints) {
      throw BudgetExceeded("product exceeds " + std::to_string(budget().max_product_points) +
                           " points");
    }
  }
  ProductSpace ps;
  ps.factors_ = factors;
  int stride = 1;
  for (const auto& f : factors) {
    ps.strides_.push_back(stride);
    stride *= f.size();
  }
  const int n = static_cast<int>(total);
  ps.fibres_.resize(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    ps.fibres_[i].assign(static_cast<std::size_t>(factors[i].size()), PointSet{});
  }
  for (int p = 0; p < n; ++p) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const int c = (p / ps.strides_[i]) % factors[i].size();
      ps.fibres_[i][static_cast<std::size_t>(c)] |= PointSet::singleton(p);
    }
  }
  // U_(x_1..x_k) = U_{x_1} x ... x U_{x_k}
  std::vector<PointSet> nbhd;
  for (int p = 0; p < n; ++p) {
    PointSet u = PointSet::full(n);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const int c = (p / ps.strides_[i]) % factors[i].size();
      u &= ps.pullback(static_cast<int>(i), factors[i].neighbourhood(c));
    }
    nbhd.push_back(u);
  }
  ps.space_ = FiniteSpace::from_neighbourhoods(std::move(nbhd));
  return ps;
}

}  // namespace fincov
