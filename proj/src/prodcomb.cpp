#include "fincov/prodcomb.hpp"

#include <algorithm>
#include <set>

#include "fincov/errors.hpp"
#include "fincov/gamederive.hpp"

namespace fincov {

namespace {

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a) {
    if (std::binary_search(b.begin(), b.end(), x)) return false;
  }
  return true;
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& e) {
  std::vector<int> out;
  for (int x : a) {
    if (!std::binary_search(e.begin(), e.end(), x)) out.push_back(x);
  }
  return out;
}

std::vector<int> normalized_indices(const ProductSpace& p, std::vector<int> e) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  for (int i : e) {
    if (i < 0 || i >= p.factor_count()) throw MismatchedCarrier("no factor " + std::to_string(i));
  }
  return e;
}

// I(U_x) for the minimal neighbourhood of x.
std::vector<int> neighbourhood_support(const ProductSpace& p, int x) {
  return BasicSet::hull(p, p.space().neighbourhood(x)).support();
}

}  // namespace

// ---------------------------------------------------------------------------
// Basic sets

BasicSet::BasicSet(const ProductSpace& product, std::map<int, PointSet> constraints)
    : product_(product) {
  for (const auto& [i, side] : constraints) {
    if (i < 0 || i >= product.factor_count()) {
      throw MismatchedCarrier("no factor " + std::to_string(i));
    }
    const PointSet whole = product.factors()[static_cast<std::size_t>(i)].carrier();
    if (!side.subset_of(whole)) {
      throw MismatchedCarrier("side " + side.str() + " leaves factor " + std::to_string(i));
    }
    if (side != whole) constraints_[i] = side;
  }
}

BasicSet BasicSet::hull(const ProductSpace& product, PointSet s) {
  std::map<int, PointSet> c;
  auto sides = product.sides(s);
  for (int i = 0; i < product.factor_count(); ++i) c[i] = sides[static_cast<std::size_t>(i)];
  return BasicSet(product, c);
}

PointSet BasicSet::side(int i) const {
  auto it = constraints_.find(i);
  return it == constraints_.end() ? product_.factors()[static_cast<std::size_t>(i)].carrier()
                                  : it->second;
}

std::vector<int> BasicSet::support() const {
  std::vector<int> out;
  for (const auto& [i, side] : constraints_) out.push_back(i);
  return out;
}

PointSet BasicSet::realize() const {
  PointSet out = product_.space().carrier();
  for (const auto& [i, side] : constraints_) out &= product_.pullback(i, side);
  return out;
}

bool BasicSet::is_open() const {
  return std::all_of(constraints_.begin(), constraints_.end(), [&](const auto& c) {
    return product_.factors()[static_cast<std::size_t>(c.first)].is_open(c.second);
  });
}

std::string BasicSet::str() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [i, side] : constraints_) {
    s += (first ? "" : ",") + std::to_string(i) + ":" + side.str();
    first = false;
  }
  return s + "}";
}

std::vector<int> support_of(const std::vector<BasicSet>& family) {
  std::set<int> all;
  for (const auto& b : family) {
    for (int i : b.support()) all.insert(i);
  }
  return {all.begin(), all.end()};
}

// ---------------------------------------------------------------------------
// Support lemmas

IntersectionVerdict disjoint_support_intersection(const BasicSet& b1, const BasicSet& b2) {
  if (b1.realize().empty() || b2.realize().empty()) throw EmptyInput("basic sets must be non-empty");
  IntersectionVerdict out;
  const auto s1 = b1.support();
  for (int i : b2.support()) {
    if (std::binary_search(s1.begin(), s1.end(), i)) out.shared.push_back(i);
  }
  // For boxes, pi_F of the intersection is the box of the side intersections.
  out.nonempty = std::all_of(out.shared.begin(), out.shared.end(),
                             [&](int i) { return b1.side(i).meets(b2.side(i)); });
  out.brute_force = b1.realize().meets(b2.realize());
  return out;
}

DenseVerdict dense_union_check(const std::vector<std::vector<BasicSet>>& families) {
  if (families.empty()) throw EmptyInput("no families");
  for (const auto& fam : families) {
    if (fam.empty()) throw EmptyInput("empty family");
  }
  const ProductSpace& p = families.front().front().product();
  std::vector<std::vector<int>> supports;
  PointSet all;
  for (const auto& fam : families) {
    for (const auto& b : fam) {
      if (!(b.product().space() == p.space())) throw MismatchedCarrier("basic sets over different products");
      if (b.realize().empty()) throw EmptyInput("empty basic set " + b.str());
      all |= b.realize();
    }
    supports.push_back(support_of(fam));
  }
  for (std::size_t a = 0; a < supports.size(); ++a) {
    for (std::size_t b = a + 1; b < supports.size(); ++b) {
      if (!disjoint(supports[a], supports[b])) {
        throw SupportsNotDisjoint("families " + std::to_string(a) + " and " + std::to_string(b) +
                                  " share factors");
      }
    }
  }
  DenseVerdict out;
  out.closure = p.space().closure(all);
  out.dense = out.closure == p.space().carrier();
  out.escape = true;
  for (int x = 0; x < p.space().size() && out.escape; ++x) {
    const auto ux = neighbourhood_support(p, x);
    out.escape = std::any_of(supports.begin(), supports.end(),
                             [&](const std::vector<int>& s) { return disjoint(s, ux); });
  }
  return out;
}

InclusionVerdict inclusion_lemma_check(const ProductSpace& p, PointSet g, PointSet r,
                                       const std::vector<int>& e_in,
                                       const std::vector<std::vector<BasicSet>>& families) {
  const FiniteSpace& x = p.space();
  const auto e = normalized_indices(p, e_in);
  if (!g.subset_of(x.carrier()) || !x.is_open(g)) throw HypothesisViolated("G is not open");
  if (!r.subset_of(x.carrier()) || !is_regular_open(x, r)) {
    throw HypothesisViolated("R is not regular open");
  }
  if (families.empty()) throw HypothesisViolated("no families of basic sets");
  std::vector<std::vector<int>> outside;
  const PointSet g_e = p.project_to(g, e);
  for (std::size_t n = 0; n < families.size(); ++n) {
    PointSet u;
    for (const auto& b : families[n]) {
      if (!b.realize().subset_of(r)) {
        throw HypothesisViolated("basic set " + b.str() + " is not inside R");
      }
      u |= b.realize();
    }
    if (!g_e.subset_of(p.project_to(u, e))) {
      throw HypothesisViolated("family " + std::to_string(n) + " does not project onto pi_E[G]");
    }
    outside.push_back(minus(support_of(families[n]), e));
  }
  for (std::size_t a = 0; a < outside.size(); ++a) {
    for (std::size_t b = a + 1; b < outside.size(); ++b) {
      if (!disjoint(outside[a], outside[b])) {
        throw HypothesisViolated("supports of families " + std::to_string(a) + " and " +
                                 std::to_string(b) + " meet outside E");
      }
    }
  }
  InclusionVerdict out;
  out.included = g.subset_of(r);
  out.escape = true;
  g.for_each([&](int pt) {
    const auto ux = minus(neighbourhood_support(p, pt), e);
    out.escape = out.escape && std::any_of(outside.begin(), outside.end(), [&](const auto& s) {
                   return disjoint(s, ux);
                 });
  });
  return out;
}

// ---------------------------------------------------------------------------
// Blockers

std::vector<BasicSet> maximal_basic_subsets(const ProductSpace& p, PointSet s, bool open_only) {
  const int m = p.factor_count();
  std::vector<std::vector<PointSet>> candidates(static_cast<std::size_t>(m));
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) {
    const FiniteSpace& f = p.factors()[static_cast<std::size_t>(i)];
    auto& c = candidates[static_cast<std::size_t>(i)];
    for_each_subset(f.carrier(), [&](PointSet side) {
      if (!side.empty() && (!open_only || f.is_open(side))) c.push_back(side);
    });
    std::sort(c.begin(), c.end());
    total *= c.size();
    if (total > budget().max_enumerated_covers) {
      throw BudgetExceeded("too many boxes to enumerate basic subsets");
    }
  }

  std::vector<BasicSet> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
  std::vector<PointSet> sides(static_cast<std::size_t>(m));
  while (true) {
    for (int i = 0; i < m; ++i) {
      sides[static_cast<std::size_t>(i)] = candidates[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
    }
    if (p.box(sides).subset_of(s)) {
      // A strictly larger box inside s can be reached by enlarging one side.
      bool maximal = true;
      for (int i = 0; i < m && maximal; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const PointSet own = sides[ui];
        for (PointSet bigger : candidates[ui]) {
          if (bigger == own || !own.subset_of(bigger)) continue;
          sides[ui] = bigger;
          bool inside = p.box(sides).subset_of(s);
          sides[ui] = own;
          if (inside) {
            maximal = false;
            break;
          }
        }
      }
      if (maximal) {
        std::map<int, PointSet> c;
        for (int i = 0; i < m; ++i) c[i] = sides[static_cast<std::size_t>(i)];
        out.emplace_back(p, c);
      }
    }
    int i = 0;
    while (i < m && ++pick[static_cast<std::size_t>(i)] == candidates[static_cast<std::size_t>(i)].size()) {
      pick[static_cast<std::size_t>(i++)] = 0;
    }
    if (i == m) break;
  }
  return out;
}

Blocker minimum_hitting_set(const std::vector<std::vector<int>>& sets) {
  std::set<int> universe_set;
  for (const auto& s : sets) {
    if (s.empty()) throw PreconditionFailed("an empty index set cannot be hit");
    universe_set.insert(s.begin(), s.end());
  }
  const std::vector<int> universe(universe_set.begin(), universe_set.end());
  const std::size_t n = universe.size();
  for (std::size_t k = 0; k <= n; ++k) {
    // Combinations of k positions in lexicographic order.
    std::vector<std::size_t> c(k);
    for (std::size_t j = 0; j < k; ++j) c[j] = j;
    while (true) {
      std::vector<int> chosen;
      for (std::size_t j : c) chosen.push_back(universe[j]);
      Blocker b{chosen, {}};
      bool all_hit = true;
      for (const auto& s : sets) {
        auto it = std::find_if(chosen.begin(), chosen.end(),
                               [&](int x) { return std::binary_search(s.begin(), s.end(), x); });
        if (it == chosen.end()) {
          all_hit = false;
          break;
        }
        b.hits.emplace_back(s, *it);
      }
      if (all_hit) return b;
      std::size_t j = k;
      while (j > 0 && c[j - 1] == n - k + j - 1) --j;
      if (j == 0) break;
      ++c[j - 1];
      for (std::size_t t = j; t < k; ++t) c[t] = c[t - 1] + 1;
    }
  }
  throw PreconditionFailed("no hitting set");  // unreachable: the universe hits everything
}

Blocker finite_blocker(const ProductSpace& p, PointSet r) {
  const FiniteSpace& x = p.space();
  if (r == x.carrier()) throw NotProperSubset("R is the whole product");
  if (!r.subset_of(x.carrier()) || !is_regular_open(x, r)) {
    throw HypothesisViolated("R is not regular open");
  }
  std::set<std::vector<int>> supports;
  for (const auto& b : maximal_basic_subsets(p, r)) supports.insert(b.support());
  return minimum_hitting_set({supports.begin(), supports.end()});
}

Blocker finite_blocker_relative(const ProductSpace& p, PointSet g, PointSet r,
                                const std::vector<int>& e_in) {
  const FiniteSpace& x = p.space();
  const auto e = normalized_indices(p, e_in);
  if (!x.is_open(g)) throw HypothesisViolated("G is not open");
  if (!x.is_open(r)) throw HypothesisViolated("R is not open");
  if (g.subset_of(regular_open_extension(x, r))) {
    throw HypothesisViolated("G lies inside int(cl R)");
  }
  // Enlarging a box only shrinks its support, so maximal open boxes suffice.
  const auto boxes = maximal_basic_subsets(p, r, true);
  if (boxes.size() > 16) throw BudgetExceeded("too many maximal open boxes inside R");
  const PointSet g_e = p.project_to(g, e);
  std::set<std::vector<int>> to_hit;
  for (std::uint32_t mask = 1; mask < (1U << boxes.size()); ++mask) {
    PointSet u;
    std::vector<BasicSet> fam;
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      if (mask >> k & 1U) {
        u |= boxes[k].realize();
        fam.push_back(boxes[k]);
      }
    }
    if (!g_e.subset_of(p.project_to(u, e))) continue;
    auto s = minus(support_of(fam), e);
    // An empty remainder would put G inside R.
    if (s.empty()) throw PreconditionFailed("family with support inside E covers G");
    to_hit.insert(s);
  }
  return minimum_hitting_set({to_hit.begin(), to_hit.end()});
}

// ---------------------------------------------------------------------------
// Regular open extensions

Cover regular_open_cover_extension(const FiniteSpace& space, const Cover& r) {
  std::vector<PointSet> out;
  for (PointSet e : r.elements()) out.push_back(regular_open_extension(space, e));
  return Cover(r.over(), out);
}

ExtensionVerdict extension_refinement_check(const FiniteSpace& space, const Cover& r,
                                            const Cover& v1, const Cover& v) {
  if (!is_open_cover(space, r)) throw HypothesisViolated("R is not an open cover");
  if (!is_open_cover(space, v1)) throw HypothesisViolated("V1 is not an open cover");
  if (!refines(r, v1)) throw HypothesisViolated("R does not refine V1");
  if (!double_star_refines(v1, v)) throw HypothesisViolated("V1 does not double-star refine V");
  ExtensionVerdict out;
  out.extension_refines = refines(regular_open_cover_extension(space, r), v);
  // Finite unions are closed under union and int(cl .) is monotone, so the
  // largest union of R decides it: its extension must fit in the union of V.
  PointSet all_r, all_v;
  for (PointSet e : r.elements()) all_r |= e;
  for (PointSet e : v.elements()) all_v |= e;
  out.directed_refines = regular_open_extension(space, all_r).subset_of(all_v);
  return out;
}

// ---------------------------------------------------------------------------
// Normal covers of products

namespace {

// Standard perversities whose first entry is at most n.
std::vector<Perversity> perversities_up_to(int n) {
  std::vector<Perversity> out;
  for (std::size_t count = 1;; ++count) {
    auto ps = standard_perversities(count);
    if (ps.back()(1) > n) return out;
    out.push_back(ps.back());
  }
}

void check_certificate(const PreUniformity& mu, const Certificate& c, const std::string& what) {
  Verdict v = verify_certificate(mu, c);
  if (!v.ok) {
    throw PreconditionFailed(what + " failed verification at node " + std::to_string(v.node) +
                             ": " + v.reason);
  }
}

// Certificate for V in lambda(mu). The certificate only replays the trace up
// to the first stage holding V, so the later stages, which can be costly, are
// computed only when V is not already a member of mu.
Certificate certify_in_lambda(const PreUniformity& mu, const Cover& v) {
  if (membership(mu, v).member) {
    DerivationTrace first;
    first.stages.push_back(mu);
    return certify_membership(first, v);
  }
  return certify_membership(lambda_coreflection(mu).trace, v);
}

// T_F crossed with the remaining factors, with the perverse product of the
// strategy trees of each end's sides hung below that end.
CoverTree extend_tree(const ProductSpace& p, const ProductSpace& sub, const std::vector<int>& f,
                      const std::vector<PreUniformity>& factors, const CoverTree& t_f) {
  std::vector<TreeNode> nodes;
  for (const auto& n : t_f.nodes()) nodes.push_back(TreeNode{p.cylinder(n.label, f), n.parent, {}});
  const auto ps = perversities_up_to(static_cast<int>(f.size()));
  for (std::size_t k = 0; k < t_f.size(); ++k) {
    if (!t_f.is_leaf(k)) continue;
    const auto sides = sub.sides(t_f.node(k).label);
    std::vector<CoverTree> trees;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const auto& factor = factors[static_cast<std::size_t>(f[j])].space();
      trees.push_back(strategy_tree(least_point_strategy(factor), sides[j]));
    }
    auto prod = set_theoretic_perverse_product(sub, trees, ps, ps.size());
    std::vector<int> index(prod.nodes.size(), static_cast<int>(k));
    for (std::size_t q = 1; q < prod.nodes.size(); ++q) {
      // In a tree the immediate predecessor is the last, deepest one.
      int parent = index[prod.predecessors[q].back()];
      index[q] = static_cast<int>(nodes.size());
      nodes.push_back(TreeNode{p.cylinder(prod.nodes[q].label, f), parent, {}});
      if (nodes.size() > budget().max_tree_nodes) {
        throw BudgetExceeded("extended tree exceeds " + std::to_string(budget().max_tree_nodes) +
                             " nodes");
      }
    }
  }
  return CoverTree(std::move(nodes));
}

}  // namespace

NormalCoverRun normal_cover_certificate(const std::vector<PreUniformity>& factors, const Cover& v) {
  if (factors.empty()) throw EmptyInput("no factors");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    auto sc = is_supercomplete(factors[i]);
    if (!sc.supercomplete) {
      throw NotSupercomplete("factor " + std::to_string(i) + " misses " +
                             (sc.counterexample ? sc.counterexample->str() : std::string("a cover")));
    }
  }
  NormalCoverRun run{product_preuniformity(factors), {}, {}, {}, {}, {}, {}, {}, {}, {}, 0, {}, {}};
  const ProductSpace& p = run.product.product;
  const FiniteSpace& x = p.space();
  if (v.over() != x.carrier()) throw MismatchedCarrier("V is not a cover of the product");
  if (!is_open_cover(x, v)) throw NotNormal("V is not an open cover");
  if (!is_normal_cover(x, v).normal) throw NotNormal("V is not a normal cover of the product");

  // R: regular open extensions of the minimal neighbourhoods. The component
  // partition is a normal V1 with R < V1 <** V.
  std::vector<PointSet> rs;
  for (int pt = 0; pt < x.size(); ++pt) rs.push_back(regular_open_extension(x, x.neighbourhood(pt)));
  run.r = reduced(Cover(x.carrier(), rs));
  try {
    run.r_check = extension_refinement_check(x, run.r, Cover(x.carrier(), components(x)), v);
  } catch (const HypothesisViolated& e) {
    throw NotNormal(std::string("no regular open refinement: ") + e.what());
  }
  if (!run.r_check.extension_refines || !run.r_check.directed_refines) {
    throw NotNormal("regular open extension of R does not refine V");
  }

  run.g = minimal_neighbourhood_cover(x);
  std::set<int> f;
  for (PointSet g : run.g.elements()) {
    for (int i : BasicSet::hull(p, g).support()) f.insert(i);
    for (PointSet r : run.r.elements()) {
      if (r == x.carrier() || !r.meets(g)) continue;
      for (int i : finite_blocker(p, r).indices) f.insert(i);
    }
  }
  run.f.assign(f.begin(), f.end());

  if (run.f.empty()) {
    run.w_f = Cover(PointSet::full(1), {PointSet::full(1)});
    run.t0 = CoverTree::leaf(x.carrier());
  } else {
    std::vector<PreUniformity> sub_factors;
    for (int i : run.f) sub_factors.push_back(factors[static_cast<std::size_t>(i)]);
    run.sub = product_preuniformity(sub_factors);
    const ProductSpace& sp = run.sub->product;
    std::vector<PointSet> gs, bs;
    for (PointSet g : run.g.elements()) gs.push_back(p.project_to(g, run.f));
    for (PointSet r : run.r.elements()) {
      for (const auto& b : maximal_basic_subsets(p, r, true)) bs.push_back(p.project_to(b.realize(), run.f));
    }
    run.w_f = reduced(meet(Cover(sp.space().carrier(), gs), Cover(sp.space().carrier(), bs)));
    run.t_f = certify_in_lambda(run.sub->mu, run.w_f);
    check_certificate(run.sub->mu, *run.t_f, "certificate for W_F");
    run.t0 = extend_tree(p, sp, run.f, factors, run.t_f->tree);
  }

  // Every point lies in an open box inside some R, its minimal neighbourhood,
  // so no end survives to a second stage.
  PointSet coverable;
  for (PointSet r : run.r.elements()) {
    for (const auto& b : maximal_basic_subsets(p, r, true)) coverable |= b.realize();
  }
  std::size_t end_star = 0;
  for (std::size_t k = 0; k < run.t0.size(); ++k) {
    if (run.t0.is_leaf(k) && !run.t0.node(k).label.subset_of(coverable)) ++end_star;
  }
  run.end_star_sizes.push_back(end_star);
  if (end_star != 0) throw PreconditionFailed("ends outside the basic subsets of R");
  try {
    run.stage_bound = x.closed_sets().size();
  } catch (const BudgetExceeded&) {
    run.stage_bound = x.size() >= 63 ? SIZE_MAX : std::size_t{1} << x.size();
  }

  // directed(V) reduces to the single set covering X.
  run.directed_certificate = certify_in_lambda(run.product.mu, Cover(x.carrier(), {x.carrier()}));
  check_certificate(run.product.mu, run.directed_certificate, "certificate for directed V");
  run.certificate = certify_in_lambda(run.product.mu, v);
  check_certificate(run.product.mu, run.certificate, "certificate for V");
  return run;
}

}  // namespace fincov
