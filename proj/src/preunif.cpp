#include "fincov/preunif.hpp"

#include <algorithm>
#include <map>

#include "fincov/errors.hpp"

namespace fincov {

namespace {

// Guard against a runaway lambda iteration. The reduced-cover lattice is
// finite so the iteration always stops, but each stage costs a derivative.
constexpr std::size_t kMaxStages = 64;

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    out *= base;
    if (out > cap) throw BudgetExceeded("choice functions exceed cap");
  }
  return out;
}

// Calls f on every choice vector in {0..base-1}^len, first coordinate fastest.
template <class F>
void for_each_choice(std::size_t base, std::size_t len, F&& f) {
  std::vector<std::size_t> c(len, 0);
  for (;;) {
    f(c);
    std::size_t k = 0;
    while (k < len && ++c[k] == base) c[k++] = 0;
    if (k == len) return;
  }
}

std::vector<std::size_t> combination_head(std::size_t len) {
  std::vector<std::size_t> c(len);
  for (std::size_t k = 0; k < len; ++k) c[k] = k;
  return c;
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t len = c.size();
  for (std::size_t k = len; k-- > 0;) {
    if (c[k] < n - len + k) {
      ++c[k];
      for (std::size_t j = k + 1; j < len; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Drops repeats and sets inside another element, in place; the reduced form.
void keep_maximal(std::vector<PointSet>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < v.size() && !dominated; ++j) {
      dominated = j != i && v[i].subset_of(v[j]);
    }
    if (!dominated) v[out++] = v[i];
  }
  v.resize(out);
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::filter ? "filter" : "prefilter"; }

Mode mode_from_string(const std::string& s) {
  if (s == "filter") return Mode::filter;
  if (s == "prefilter") return Mode::prefilter;
  throw InputError("unknown mode '" + s + "'");
}

PreUniformity::PreUniformity(FiniteSpace space, std::vector<Cover> basis, Mode mode)
    : space_(std::move(space)), mode_(mode) {
  if (basis.empty()) throw EmptyInput("pre-uniformity with an empty basis");
  for (const auto& c : basis) {
    if (c.over() != space_.carrier()) {
      throw MismatchedCarrier("basis cover over " + c.over().str() + ", carrier is " +
                              space_.carrier().str());
    }
    Cover r = reduced(c);
    if (std::find(basis_.begin(), basis_.end(), r) == basis_.end()) basis_.push_back(std::move(r));
  }
}

Cover PreUniformity::meet_of(const std::vector<std::size_t>& indices) const {
  Cover out(carrier(), {carrier()});
  for (std::size_t i : indices) out = meet(out, basis_.at(i));
  return out;
}

Cover PreUniformity::meet_of_all() const { return meet_all(basis_); }

std::optional<std::vector<std::size_t>> first_index_list(
    std::size_t n, std::size_t max_length,
    const std::function<bool(const std::vector<std::size_t>&)>& accept) {
  std::size_t tried = 0;
  for (std::size_t len = 1; len <= std::min(n, max_length); ++len) {
    std::vector<std::size_t> c = combination_head(len);
    do {
      if (++tried > budget().max_enumerated_covers) {
        throw BudgetExceeded("witness search exceeds enumeration cap");
      }
      if (accept(c)) return c;
    } while (next_combination(c, n));
  }
  return std::nullopt;
}

namespace {

Membership member_via(const PreUniformity& mu, const Cover& v, PointSet over) {
  auto fits = [&](const Cover& c) {
    return refines(over == mu.carrier() ? c : restrict_to(c, over), v);
  };
  Membership out;
  if (mu.mode() == Mode::prefilter) {
    for (std::size_t i = 0; i < mu.basis().size(); ++i) {
      if (fits(mu.basis()[i])) {
        out.member = true;
        out.witness = {i};
        break;
      }
    }
    return out;
  }
  if (!fits(mu.meet_of_all())) return out;
  auto w = first_index_list(mu.basis().size(), mu.basis().size(),
                            [&](const std::vector<std::size_t>& l) { return fits(mu.meet_of(l)); });
  out.member = true;
  out.witness = *w;
  return out;
}

}  // namespace

Membership membership(const PreUniformity& mu, const Cover& v) {
  if (v.over() != mu.carrier()) {
    throw MismatchedCarrier("cover over " + v.over().str() + ", carrier is " + mu.carrier().str());
  }
  return member_via(mu, v, mu.carrier());
}

Membership restricted_membership(const PreUniformity& mu, const Cover& v) {
  if (!v.over().subset_of(mu.carrier())) {
    throw MismatchedCarrier(v.over().str() + " is not inside " + mu.carrier().str());
  }
  return member_via(mu, v, v.over());
}

Derived derivative_with_provenance(const PreUniformity& mu, const PreUniformity& nu) {
  if (!(mu.space() == nu.space())) throw MismatchedCarrier("derivative of different spaces");

  std::vector<std::vector<std::size_t>> parents;
  const std::size_t depth = mu.mode() == Mode::filter
                                ? static_cast<std::size_t>(std::max(1, budget().meet_depth))
                                : 1;
  for (std::size_t len = 1; len <= std::min(depth, mu.basis().size()); ++len) {
    std::vector<std::size_t> c = combination_head(len);
    do {
      parents.push_back(c);
    } while (next_combination(c, mu.basis().size()));
  }

  const std::size_t cap = budget().max_choice_functions;
  std::size_t total = 0;
  std::vector<Cover> covers;
  std::vector<Provenance> prov;
  std::map<Cover, std::size_t> seen;
  std::vector<PointSet> elements;
  for (const auto& p : parents) {
    const Cover u = mu.meet_of(p);
    total += checked_power(nu.basis().size(), u.size(), cap);
    if (total > cap) throw BudgetExceeded("choice functions exceed cap");
    for_each_choice(nu.basis().size(), u.size(), [&](const std::vector<std::size_t>& choice) {
      elements.clear();
      for (std::size_t k = 0; k < u.size(); ++k) {
        for (PointSet e : nu.basis()[choice[k]].elements()) {
          if (u.element(k).meets(e)) elements.push_back(u.element(k) & e);
        }
      }
      keep_maximal(elements);
      Cover c(mu.carrier(), elements);
      if (seen.emplace(c, covers.size()).second) {
        covers.push_back(std::move(c));
        prov.push_back({p, choice});
      }
    });
  }
  return {PreUniformity(mu.space(), std::move(covers), mu.mode()), std::move(prov)};
}

PreUniformity derivative(const PreUniformity& mu, const PreUniformity& nu) {
  return derivative_with_provenance(mu, nu).result;
}

bool same_filter(const PreUniformity& a, const PreUniformity& b) {
  auto inside = [](const PreUniformity& x, const PreUniformity& y) {
    return std::all_of(x.basis().begin(), x.basis().end(),
                       [&](const Cover& c) { return membership(y, c).member; });
  };
  return inside(a, b) && inside(b, a);
}

Derived prune(const Derived& d) {
  const auto& basis = d.result.basis();
  std::vector<Cover> covers;
  std::vector<Provenance> prov;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < basis.size() && !dominated; ++j) {
      if (j == i || !refines(basis[j], basis[i])) continue;
      dominated = !refines(basis[i], basis[j]) || j < i;
    }
    if (!dominated) {
      covers.push_back(basis[i]);
      prov.push_back(d.provenance[i]);
    }
  }
  return {PreUniformity(d.result.space(), std::move(covers), d.result.mode()), std::move(prov)};
}

LambdaResult lambda_coreflection(const PreUniformity& mu, bool fast) {
  DerivationTrace trace;
  trace.fast = fast;
  trace.stages.push_back(mu);
  for (;;) {
    const PreUniformity& last = trace.stages.back();
    Derived next = prune(derivative_with_provenance(last, fast ? last : mu));
    if (same_filter(next.result, last)) break;
    if (trace.stages.size() >= kMaxStages) throw BudgetExceeded("lambda iteration did not settle");
    trace.provenance.push_back(std::move(next.provenance));
    trace.stages.push_back(std::move(next.result));
  }
  trace.fixed_stage = trace.stages.size() - 1;
  return {trace.stages.back(), std::move(trace)};
}

std::optional<std::size_t> entry_stage(const DerivationTrace& trace, const Cover& v) {
  for (std::size_t k = 0; k < trace.stages.size(); ++k) {
    if (membership(trace.stages[k], v).member) return k;
  }
  return std::nullopt;
}

Supercompleteness is_supercomplete(const PreUniformity& mu) {
  // Any open cover contains, for each x, an element holding U_x.
  const Cover m = minimal_neighbourhood_cover(mu.space());
  if (membership(mu, m).member) return {true, std::nullopt};
  return {false, m};
}

Supercompleteness supercomplete_by_enumeration(const PreUniformity& mu) {
  for (const auto& c : reduced_open_covers(mu.space())) {
    if (!membership(mu, c).member) return {false, c};
  }
  return {true, std::nullopt};
}

namespace {

// The maximal point closures; every point closure lies in one of them.
std::vector<PointSet> maximal_point_closures(const FiniteSpace& space) {
  std::vector<PointSet> all;
  for (int x = 0; x < space.size(); ++x) all.push_back(space.closure(PointSet::singleton(x)));
  std::vector<PointSet> out;
  for (PointSet a : all) {
    bool dominated = false;
    for (PointSet b : all) dominated = dominated || (a != b && a.subset_of(b));
    if (!dominated && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PreUniformity metric_fine(const PreUniformity& mu) {
  const std::vector<PointSet> pieces = maximal_point_closures(mu.space());
  auto patch = [&](const std::vector<Cover>& chosen) {
    std::vector<PointSet> elements;
    for (std::size_t n = 0; n < pieces.size(); ++n) {
      for (PointSet e : chosen[n].elements()) elements.push_back(e & pieces[n]);
    }
    return Cover(mu.carrier(), std::move(elements));
  };
  std::vector<Cover> basis;
  if (mu.mode() == Mode::filter) {
    basis.push_back(patch(std::vector<Cover>(pieces.size(), mu.meet_of_all())));
  } else {
    checked_power(mu.basis().size(), pieces.size(), budget().max_choice_functions);
    for_each_choice(mu.basis().size(), pieces.size(), [&](const std::vector<std::size_t>& c) {
      std::vector<Cover> chosen;
      for (std::size_t i : c) chosen.push_back(mu.basis()[i]);
      basis.push_back(patch(chosen));
    });
  }
  return PreUniformity(mu.space(), std::move(basis), mu.mode());
}

bool metric_fine_member(const PreUniformity& mu, const Cover& v) {
  for (int x = 0; x < mu.space().size(); ++x) {
    const PointSet f = mu.space().closure(PointSet::singleton(x));
    if (!restricted_membership(mu, restrict_to(v, f)).member) return false;
  }
  return true;
}

Cover pullback_cover(const ProductSpace& p, std::size_t i, const Cover& c) {
  std::vector<PointSet> elements;
  for (PointSet e : c.elements()) elements.push_back(p.pullback(static_cast<int>(i), e));
  return Cover(p.space().carrier(), std::move(elements));
}

ProductPreUniformity product_preuniformity(const std::vector<PreUniformity>& factors) {
  if (factors.empty()) throw EmptyInput("product of no pre-uniformities");
  std::vector<FiniteSpace> spaces;
  for (const auto& f : factors) spaces.push_back(f.space());
  ProductSpace p = product(spaces);
  std::vector<Cover> basis;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (const auto& c : factors[i].basis()) basis.push_back(pullback_cover(p, i, c));
  }
  PreUniformity mu(p.space(), std::move(basis), Mode::filter);
  return {std::move(p), std::move(mu)};
}

LambdaNeighbourhood is_lambda_neighbourhood(const PreUniformity& mu, PointSet a, PointSet n) {
  if (!a.subset_of(n) || !n.subset_of(mu.carrier())) {
    throw PreconditionFailed("need A inside N inside the carrier");
  }
  const PreUniformity lambda = lambda_coreflection(mu).lambda;
  std::vector<Cover> candidates = lambda.basis();
  // Stars only shrink under refinement, so the finest member decides.
  if (lambda.mode() == Mode::filter) candidates.push_back(lambda.meet_of_all());
  for (const auto& c : candidates) {
    if (star(a, c).subset_of(n)) return {true, c};
  }
  return {false, std::nullopt};
}

PreUniformity finite_cover_part(const PreUniformity& mu) { return mu; }

}  // namespace fincov
