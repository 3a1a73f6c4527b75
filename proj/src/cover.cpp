#include "fincov/cover.hpp"

#include <algorithm>
#include <set>

#include "fincov/errors.hpp"

namespace fincov {

namespace {

std::vector<PointSet> normalize(std::vector<PointSet> elements) {
  std::erase_if(elements, [](PointSet s) { return s.empty(); });
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

void same_carrier(const Cover& u, const Cover& v) {
  if (u.over() != v.over()) {
    throw MismatchedCarrier("covers over " + u.over().str() + " and " + v.over().str());
  }
}

// Above this many reduced open covers the pairwise star-refinement table of
// the fixed point gets too large to build.
constexpr std::size_t kFixedPointCoverCap = 3000;

std::vector<Cover> enumerate_open_antichains(const FiniteSpace& space, std::size_t cap) {
  std::vector<PointSet> opens = space.opens();
  std::erase_if(opens, [](PointSet s) { return s.empty(); });
  const PointSet carrier = space.carrier();
  // suffix_union[k]: union of opens[k..]
  std::vector<PointSet> suffix_union(opens.size() + 1);
  for (std::size_t k = opens.size(); k-- > 0;) suffix_union[k] = suffix_union[k + 1] | opens[k];

  std::vector<Cover> out;
  std::vector<PointSet> chosen;
  auto rec = [&](auto&& self, std::size_t k, PointSet covered) -> void {
    if (k == opens.size()) {
      if (covered == carrier) {
        out.push_back(Cover(carrier, chosen));
        if (out.size() > cap) throw BudgetExceeded("reduced open covers exceed enumeration cap");
      }
      return;
    }
    if ((covered | suffix_union[k]) != carrier) return;
    const PointSet o = opens[k];
    bool comparable = false;
    for (PointSet c : chosen) comparable = comparable || o.subset_of(c) || c.subset_of(o);
    if (!comparable) {
      chosen.push_back(o);
      self(self, k + 1, covered | o);
      chosen.pop_back();
    }
    self(self, k + 1, covered);
  };
  rec(rec, 0, PointSet{});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Cover::Cover(PointSet over, std::vector<PointSet> elements)
    : over_(over), elements_(normalize(std::move(elements))) {
  PointSet all;
  for (PointSet e : elements_) {
    if (!e.subset_of(over_)) {
      throw PreconditionFailed("element " + e.str() + " leaves " + over_.str());
    }
    all |= e;
  }
  if (all != over_) throw PreconditionFailed("elements do not cover " + over_.str());
}

bool Cover::contains(PointSet s) const {
  return std::binary_search(elements_.begin(), elements_.end(), s);
}

std::string Cover::str() const {
  std::string s = "{";
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (k) s += ',';
    s += elements_[k].str();
  }
  return s + "}";
}

Cover reduced(const Cover& u) {
  std::vector<PointSet> keep;
  for (PointSet a : u.elements()) {
    bool dominated = false;
    for (PointSet b : u.elements()) dominated = dominated || (a != b && a.subset_of(b));
    if (!dominated) keep.push_back(a);
  }
  return Cover(u.over(), std::move(keep));
}

bool refines(const Cover& u, const Cover& v) {
  same_carrier(u, v);
  for (PointSet a : u.elements()) {
    bool inside = false;
    for (PointSet b : v.elements()) {
      if (a.subset_of(b)) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

bool equivalent(const Cover& u, const Cover& v) { return refines(u, v) && refines(v, u); }

Cover meet(const Cover& u, const Cover& v) {
  same_carrier(u, v);
  std::vector<PointSet> out;
  for (PointSet a : u.elements()) {
    for (PointSet b : v.elements()) out.push_back(a & b);
  }
  return Cover(u.over(), std::move(out));
}

Cover meet_all(const std::vector<Cover>& covers) {
  if (covers.empty()) throw EmptyInput("meet of no covers");
  Cover out = covers.front();
  for (std::size_t k = 1; k < covers.size(); ++k) out = meet(out, covers[k]);
  return out;
}

Cover restrict_to(const Cover& u, PointSet a) {
  if (!a.subset_of(u.over())) {
    throw MismatchedCarrier(a.str() + " is not inside " + u.over().str());
  }
  std::vector<PointSet> out;
  for (PointSet e : u.elements()) out.push_back(e & a);
  return Cover(a, std::move(out));
}

Cover directed(const Cover& u) {
  // Closing under binary union gives all finite unions.
  std::set<PointSet> all(u.elements().begin(), u.elements().end());
  std::vector<PointSet> frontier(all.begin(), all.end());
  while (!frontier.empty()) {
    std::vector<PointSet> next;
    for (PointSet a : frontier) {
      for (PointSet b : u.elements()) {
        if (all.insert(a | b).second) next.push_back(a | b);
      }
    }
    if (all.size() > budget().max_enumerated_covers) {
      throw BudgetExceeded("directed cover exceeds enumeration cap");
    }
    frontier = std::move(next);
  }
  return Cover(u.over(), std::vector<PointSet>(all.begin(), all.end()));
}

PointSet star(PointSet a, const Cover& v) {
  PointSet out;
  for (PointSet e : v.elements()) {
    if (e.meets(a)) out |= e;
  }
  return out;
}

Cover star_cover(const Cover& u) {
  std::vector<PointSet> out;
  for (PointSet e : u.elements()) out.push_back(star(e, u));
  return Cover(u.over(), std::move(out));
}

bool star_refines(const Cover& u, const Cover& v) { return refines(star_cover(u), v); }

bool double_star_refines(const Cover& u, const Cover& v) {
  // If U <* W then the star cover S of U refines W, and S <* V follows from
  // W <* V. S itself always satisfies U <* S, so S is the only candidate.
  same_carrier(u, v);
  return star_refines(star_cover(u), v);
}

bool is_open_cover(const FiniteSpace& space, const Cover& u) {
  if (u.over() != space.carrier()) return false;
  return std::all_of(u.elements().begin(), u.elements().end(),
                     [&](PointSet e) { return space.is_open(e); });
}

Cover minimal_neighbourhood_cover(const FiniteSpace& space) {
  return reduced(Cover(space.carrier(), space.neighbourhoods()));
}

Cover component_partition(const FiniteSpace& space) {
  return Cover(space.carrier(), components(space));
}

std::vector<Cover> reduced_open_covers(const FiniteSpace& space) {
  return enumerate_open_antichains(space, budget().max_enumerated_covers);
}

NormalityResult normal_cover_fixed_point(const FiniteSpace& space, const Cover& v) {
  const std::vector<Cover> covers = reduced_open_covers(space);
  const std::size_t n = covers.size();
  // refiners[j]: indices i with covers[i] <* covers[j]
  std::vector<std::vector<std::size_t>> refiners(n);
  std::vector<Cover> stars;
  stars.reserve(n);
  for (const auto& c : covers) stars.push_back(star_cover(c));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (refines(stars[i], covers[j])) refiners[j].push_back(i);
    }
  }
  std::vector<bool> alive(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!alive[j]) continue;
      bool has = std::any_of(refiners[j].begin(), refiners[j].end(),
                             [&](std::size_t i) { return alive[i]; });
      if (!has) {
        alive[j] = false;
        changed = true;
      }
    }
  }
  NormalityResult result;
  for (std::size_t j = 0; j < n; ++j) {
    if (!alive[j] || !refines(covers[j], v)) continue;
    result.normal = true;
    std::vector<bool> seen(n, false);
    std::size_t cur = j;
    while (!seen[cur]) {
      seen[cur] = true;
      result.chain.push_back(covers[cur]);
      for (std::size_t i : refiners[cur]) {
        if (alive[i]) {
          cur = i;
          break;
        }
      }
    }
    break;
  }
  return result;
}

NormalityResult normal_cover_by_components(const FiniteSpace& space, const Cover& v) {
  const Cover parts = component_partition(space);
  NormalityResult result;
  if (refines(parts, v)) {
    result.normal = true;
    result.chain.push_back(parts);
  }
  return result;
}

NormalityResult is_normal_cover(const FiniteSpace& space, const Cover& v) {
  if (!is_open_cover(space, v)) return {};
  try {
    enumerate_open_antichains(space, kFixedPointCoverCap);
  } catch (const BudgetExceeded&) {
    return normal_cover_by_components(space, v);
  }
  return normal_cover_fixed_point(space, v);
}

bool is_exhaustive(const FiniteSpace& space, const Cover& u) {
  if (space.size() > budget().max_space_points) {
    throw BudgetExceeded("exhaustiveness check enumerates 2^n subsets");
  }
  bool ok = true;
  for_each_subset(space.carrier(), [&](PointSet s) {
    if (!ok || s.empty()) return;
    bool found = false;
    for (PointSet e : u.elements()) {
      const PointSet trace = e & s;
      if (!trace.empty() && is_relatively_open(space, s, trace)) {
        found = true;
        break;
      }
    }
    ok = found;
  });
  return ok;
}

std::optional<std::vector<PointSet>> left_open_ordering(const FiniteSpace& space,
                                                        const Cover& partition) {
  PointSet seen;
  for (PointSet b : partition.elements()) {
    if (b.meets(seen)) throw NotAPartition("block " + b.str() + " overlaps another block");
    seen |= b;
  }
  if (seen != space.carrier()) throw NotAPartition("blocks do not cover the carrier");

  // Greedy is complete: if P | B and P | C are open then so is P | B | C,
  // so taking any available block never blocks another.
  std::vector<PointSet> left = partition.elements();
  std::vector<PointSet> order;
  PointSet prefix;
  while (!left.empty()) {
    auto it = std::find_if(left.begin(), left.end(),
                           [&](PointSet b) { return space.is_open(prefix | b); });
    if (it == left.end()) return std::nullopt;
    prefix |= *it;
    order.push_back(*it);
    left.erase(it);
  }
  return order;
}

bool is_complete_sequence(const FiniteSpace& space, const std::vector<Cover>& covers) {
  if (covers.empty()) throw EmptyInput("empty cover sequence");
  // The tail repeats the last cover, so only distinct covers matter.
  std::vector<Cover> distinct;
  for (const auto& c : covers) {
    if (std::find(distinct.begin(), distinct.end(), c) == distinct.end()) distinct.push_back(c);
  }
  std::size_t total = 1;
  for (const auto& c : distinct) {
    total *= c.size();
    if (total > budget().max_choice_functions) {
      throw BudgetExceeded("choice functions exceed cap");
    }
  }
  bool ok = true;
  auto rec = [&](auto&& self, std::size_t k, PointSet meet_set, PointSet closure_meet) -> void {
    if (!ok) return;
    if (meet_set.empty()) return;  // no finite-intersection property: not a filter base
    if (k == distinct.size()) {
      ok = !closure_meet.empty();
      return;
    }
    for (PointSet e : distinct[k].elements()) {
      self(self, k + 1, meet_set & e, closure_meet & space.closure(e));
    }
  };
  rec(rec, 0, space.carrier(), space.carrier());
  return ok;
}

}  // namespace fincov
