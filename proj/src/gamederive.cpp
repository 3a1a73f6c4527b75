#include "fincov/gamederive.hpp"

#include <algorithm>
#include <set>

#include "fincov/errors.hpp"

namespace fincov {

// ---------------------------------------------------------------------------
// Perversities

Perversity::Perversity(std::vector<int> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 0) {
      throw InvalidPerversity("entry " + std::to_string(i + 1) + " is negative");
    }
    if (i > 0 && entries_[i] > entries_[i - 1]) {
      throw InvalidPerversity("entry " + std::to_string(i + 1) + " exceeds its predecessor");
    }
  }
  while (!entries_.empty() && entries_.back() == 0) entries_.pop_back();
}

int Perversity::operator()(std::size_t i) const {
  return i >= 1 && i <= entries_.size() ? entries_[i - 1] : 0;
}

std::vector<int> Perversity::restrict_to(std::size_t m) const {
  std::vector<int> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = (*this)(i + 1);
  return out;
}

std::string Perversity::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(entries_[i]);
  }
  return s + ")";
}

std::vector<Perversity> standard_perversities(std::size_t n) {
  std::vector<Perversity> out;
  std::vector<int> cur;
  for (std::size_t step = 0; step < n; ++step) {
    out.emplace_back(cur);
    std::size_t k = 1;
    auto at = [&](std::size_t j) { return j <= cur.size() ? cur[j - 1] : 0; };
    while (at(k) != at(k + 1)) ++k;
    if (k > cur.size()) cur.resize(k, 0);
    ++cur[k - 1];
  }
  return out;
}

std::partial_ordering perversity_order(const Perversity& p, const Perversity& q) {
  bool le = true, ge = true;
  std::size_t n = std::max(p.entries().size(), q.entries().size());
  for (std::size_t i = 1; i <= n; ++i) {
    le = le && p(i) <= q(i);
    ge = ge && p(i) >= q(i);
  }
  if (le && ge) return std::partial_ordering::equivalent;
  if (le) return std::partial_ordering::less;
  if (ge) return std::partial_ordering::greater;
  return std::partial_ordering::unordered;
}

bool perversity_set_is_tree(const std::vector<Perversity>& ps) {
  if (ps.empty()) return false;
  bool has_min = std::any_of(ps.begin(), ps.end(), [&](const Perversity& m) {
    return std::all_of(ps.begin(), ps.end(),
                       [&](const Perversity& p) { return perversity_order(m, p) <= 0; });
  });
  if (!has_min) return false;
  for (const auto& p : ps) {
    std::vector<const Perversity*> below;
    for (const auto& q : ps) {
      if (perversity_order(q, p) < 0) below.push_back(&q);
    }
    for (std::size_t i = 0; i < below.size(); ++i) {
      for (std::size_t j = i + 1; j < below.size(); ++j) {
        if (perversity_order(*below[i], *below[j]) == std::partial_ordering::unordered) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Perverse products

namespace {

std::vector<int> node_levels(const CoverTree& t) {
  std::vector<int> level(t.size(), 0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    level[k] = level[static_cast<std::size_t>(t.node(k).parent)] + 1;
  }
  return level;
}

// anc[a][b]: node a is b or one of its ancestors.
std::vector<std::vector<bool>> ancestor_matrix(const CoverTree& t) {
  std::vector<std::vector<bool>> anc(t.size(), std::vector<bool>(t.size(), false));
  for (std::size_t b = 0; b < t.size(); ++b) {
    for (int a = static_cast<int>(b); a >= 0; a = t.node(static_cast<std::size_t>(a)).parent) {
      anc[static_cast<std::size_t>(a)][b] = true;
    }
  }
  return anc;
}

PerverseProduct build_product(const std::vector<CoverTree>& trees, const std::vector<Perversity>& ps,
                              std::size_t depth_budget,
                              const std::function<PointSet(const std::vector<std::size_t>&)>& label) {
  if (trees.empty()) throw EmptyInput("no factor trees");
  const std::size_t m = trees.size();
  std::vector<std::vector<int>> levels;
  std::vector<std::vector<std::vector<bool>>> anc;
  for (const auto& t : trees) {
    if (t.size() == 0) throw EmptyInput("empty factor tree");
    levels.push_back(node_levels(t));
    anc.push_back(ancestor_matrix(t));
  }

  std::set<std::vector<int>> vectors;
  for (const auto& p : ps) vectors.insert(p.restrict_to(m));

  std::vector<PerverseNode> all;
  for (const auto& v : vectors) {
    std::vector<std::vector<std::size_t>> choices(m);
    bool possible = true;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < trees[i].size(); ++k) {
        if (levels[i][k] == v[i]) choices[i].push_back(k);
      }
      possible = possible && !choices[i].empty();
    }
    if (!possible) continue;
    std::vector<std::size_t> pick(m, 0);
    while (true) {
      PerverseNode node;
      for (std::size_t i = 0; i < m; ++i) node.factors.push_back(choices[i][pick[i]]);
      node.levels = v;
      all.push_back(std::move(node));
      if (all.size() > budget().max_tree_nodes) {
        throw BudgetExceeded("perverse product exceeds " + std::to_string(budget().max_tree_nodes) +
                             " nodes");
      }
      std::size_t i = 0;
      while (i < m && ++pick[i] == choices[i].size()) pick[i++] = 0;
      if (i == m) break;
    }
  }

  auto below = [&](const PerverseNode& x, const PerverseNode& y) {
    if (x.factors == y.factors) return false;
    for (std::size_t i = 0; i < m; ++i) {
      if (!anc[i][x.factors[i]][y.factors[i]]) return false;
    }
    return true;
  };

  std::vector<std::size_t> count(all.size(), 0);
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = 0; b < all.size(); ++b) {
      if (below(all[a], all[b])) ++count[b];
    }
  }
  std::vector<PerverseNode> kept;
  for (std::size_t a = 0; a < all.size(); ++a) {
    if (count[a] <= depth_budget) kept.push_back(all[a]);
  }
  std::vector<std::size_t> kept_count;
  for (std::size_t a = 0; a < all.size(); ++a) {
    if (count[a] <= depth_budget) kept_count.push_back(count[a]);
  }
  std::vector<std::size_t> order(kept.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (kept_count[a] != kept_count[b]) return kept_count[a] < kept_count[b];
    return kept[a].factors < kept[b].factors;
  });

  PerverseProduct out;
  for (std::size_t k : order) {
    out.nodes.push_back(kept[k]);
    if (label) out.nodes.back().label = label(kept[k].factors);
  }
  const std::size_t n = out.nodes.size();
  out.predecessors.assign(n, {});
  out.successors.assign(n, {});
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      if (below(out.nodes[a], out.nodes[b])) out.predecessors[b].push_back(a);
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a : out.predecessors[b]) {
      bool immediate = std::none_of(out.predecessors[b].begin(), out.predecessors[b].end(),
                                    [&](std::size_t z) {
                                      return std::binary_search(out.predecessors[z].begin(),
                                                                out.predecessors[z].end(), a);
                                    });
      if (immediate) out.successors[a].push_back(b);
    }
  }
  return out;
}

}  // namespace

PerverseProduct perverse_product(const std::vector<CoverTree>& trees,
                                 const std::vector<Perversity>& ps, std::size_t depth_budget) {
  return build_product(trees, ps, depth_budget, nullptr);
}

PerverseProduct set_theoretic_perverse_product(const ProductSpace& space,
                                               const std::vector<CoverTree>& trees,
                                               const std::vector<Perversity>& ps,
                                               std::size_t depth_budget) {
  if (static_cast<int>(trees.size()) != space.factor_count()) {
    throw MismatchedCarrier("one tree per factor expected");
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (!trees[i].root_label().subset_of(space.factors()[i].carrier())) {
      throw MismatchedCarrier("tree " + std::to_string(i) + " leaves its factor");
    }
  }
  return build_product(trees, ps, depth_budget, [&](const std::vector<std::size_t>& f) {
    std::vector<PointSet> sides;
    for (std::size_t i = 0; i < f.size(); ++i) sides.push_back(trees[i].node(f[i]).label);
    return space.box(sides);
  });
}

bool is_tree(const PerverseProduct& product) {
  const std::size_t n = product.nodes.size();
  if (n == 0) return false;
  std::size_t minima = 0;
  for (std::size_t k = 0; k < n; ++k) minima += product.predecessors[k].empty() ? 1 : 0;
  if (minima != 1 || !product.predecessors[0].empty()) return false;
  auto le = [&](std::size_t a, std::size_t b) {
    return a == b || std::binary_search(product.predecessors[b].begin(),
                                        product.predecessors[b].end(), a);
  };
  for (std::size_t k = 0; k < n; ++k) {
    const auto& pred = product.predecessors[k];
    for (std::size_t i = 0; i < pred.size(); ++i) {
      for (std::size_t j = i + 1; j < pred.size(); ++j) {
        if (!le(pred[i], pred[j]) && !le(pred[j], pred[i])) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// K-derivatives

KClass k_singletons() {
  return {"singletons", [](const FiniteSpace&, PointSet n) { return n.size() == 1; }};
}

KClass k_discrete() {
  return {"discrete", [](const FiniteSpace& space, PointSet n) {
            bool ok = true;
            n.for_each([&](int y) { ok = ok && (space.neighbourhood(y) & n) == PointSet::singleton(y); });
            return ok;
          }};
}

KClass k_all() {
  return {"all", [](const FiniteSpace&, PointSet) { return true; }};
}

KClass k_class(const std::string& name) {
  if (name == "singletons") return k_singletons();
  if (name == "discrete") return k_discrete();
  if (name == "all") return k_all();
  throw InputError("unknown class '" + name + "' (expected singletons, discrete or all)");
}

PointSet k_derivative(const FiniteSpace& space, const KClass& k, PointSet s) {
  if (!s.subset_of(space.carrier())) throw PreconditionFailed("set leaves the carrier");
  PointSet out;
  s.for_each([&](int x) {
    if (!k.contains(space, space.neighbourhood(x) & s)) out |= PointSet::singleton(x);
  });
  return out;
}

std::vector<PointSet> k_derivative_chain(const FiniteSpace& space, const KClass& k, PointSet s) {
  std::vector<PointSet> chain;
  while (!s.empty()) {
    chain.push_back(s);
    PointSet d = k_derivative(space, k, s);
    if (d == s) {
      throw NotKScattered("no point of " + s.str() + " has a " + k.name + " neighbourhood");
    }
    s = d;
  }
  return chain;
}

int k_rank_of(const FiniteSpace& space, const KClass& k, PointSet s) {
  return static_cast<int>(k_derivative_chain(space, k, s).size());
}

int k_rank(const FiniteSpace& space, const KClass& k) {
  return k_rank_of(space, k, space.carrier());
}

bool is_k_scattered(const FiniteSpace& space, const KClass& k) {
  try {
    k_rank(space, k);
    return true;
  } catch (const NotKScattered&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Decomposition trees

namespace {

struct DecompositionBuilder {
  const FiniteSpace& space;
  const KClass& k;
  std::size_t depth_budget;
  Convention convention;
  std::vector<TreeNode> nodes;

  void add(PointSet label, int parent) {
    nodes.push_back(TreeNode{label, parent, {}});
    if (nodes.size() > budget().max_tree_nodes) {
      throw BudgetExceeded("decomposition tree exceeds " +
                           std::to_string(budget().max_tree_nodes) + " nodes");
    }
  }

  std::vector<PointSet> successors(PointSet s, const std::vector<PointSet>& chain) {
    const int rank = static_cast<int>(chain.size());
    const PointSet top = chain.back();
    const PointSet rest = s - top;
    const PointSet ambient = convention == Convention::relative ? rest : s;
    std::vector<PointSet> out{top};
    for_each_subset(rest, [&](PointSet u) {
      if (u.empty()) return;
      if (relative_closure(space, ambient, u) != u) return;
      if (relative_interior(space, ambient, u).empty()) return;
      if (k_rank_of(space, k, u) >= rank) return;
      out.push_back(u);
    });
    std::sort(out.begin() + 1, out.end());
    return out;
  }

  void expand(PointSet s, int parent, std::size_t depth) {
    add(s, parent);
    const int self = static_cast<int>(nodes.size()) - 1;
    auto chain = k_derivative_chain(space, k, s);
    if (chain.size() <= 1) return;
    if (depth >= depth_budget) {
      throw BudgetExceeded("decomposition tree deeper than " + std::to_string(depth_budget));
    }
    auto next = successors(s, chain);
    add(next.front(), self);
    for (std::size_t i = 1; i < next.size(); ++i) expand(next[i], self, depth + 1);
  }
};

}  // namespace

CoverTree decomposition_tree(const FiniteSpace& space, const KClass& k, std::size_t depth_budget,
                             Convention convention) {
  DecompositionBuilder b{space, k, depth_budget, convention, {}};
  b.expand(space.carrier(), -1, 0);
  return CoverTree(std::move(b.nodes));
}

// ---------------------------------------------------------------------------
// Strategies

namespace {

std::size_t table_size(const FiniteSpace& space) {
  if (space.size() > budget().max_space_points) {
    throw BudgetExceeded("strategy tables need at most " +
                         std::to_string(budget().max_space_points) + " points");
  }
  return std::size_t{1} << space.size();
}

template <typename F>
std::vector<PointSet> tabulate(const FiniteSpace& space, F&& choose) {
  std::vector<PointSet> table(table_size(space));
  for (std::uint64_t b = 1; b < table.size(); ++b) table[b] = choose(PointSet(b));
  return table;
}

}  // namespace

Strategy::Strategy(FiniteSpace space, std::vector<PointSet> table)
    : space_(std::move(space)), table_(std::move(table)) {}

Strategy Strategy::validated(FiniteSpace space, std::vector<PointSet> table) {
  for (std::uint64_t b = 1; b < table.size(); ++b) {
    PointSet s(b), t = table[b];
    if (t.empty()) throw InvalidStrategy("phi(" + s.str() + ") is empty");
    if (!t.subset_of(s)) {
      throw InvalidStrategy("phi(" + s.str() + ") = " + t.str() + " is not inside " + s.str());
    }
    if (!is_relatively_open(space, s, t)) {
      throw InvalidStrategy("phi(" + s.str() + ") = " + t.str() + " is not open in " + s.str());
    }
  }
  return Strategy(std::move(space), std::move(table));
}

Strategy Strategy::from_table(const FiniteSpace& space, const std::map<PointSet, PointSet>& table) {
  for (const auto& [s, t] : table) {
    if (s.empty() || !s.subset_of(space.carrier())) {
      throw InvalidStrategy("table key " + s.str() + " is not a non-empty subset of the carrier");
    }
  }
  return validated(space, tabulate(space, [&](PointSet s) {
                     auto it = table.find(s);
                     if (it == table.end()) throw InvalidStrategy("no choice for " + s.str());
                     return it->second;
                   }));
}

PointSet Strategy::operator()(PointSet s) const {
  if (s.empty() || !s.subset_of(space_.carrier())) {
    throw PreconditionFailed("strategy applied to " + s.str());
  }
  return table_[s.bits()];
}

Strategy least_point_strategy(const FiniteSpace& space) {
  return Strategy::validated(space, tabulate(space, [&](PointSet s) {
                               return space.neighbourhood(s.first()) & s;
                             }));
}

Strategy smallest_neighbourhood_strategy(const FiniteSpace& space) {
  return Strategy::validated(space, tabulate(space, [&](PointSet s) {
                               PointSet best;
                               s.for_each([&](int x) {
                                 PointSet t = space.neighbourhood(x) & s;
                                 if (best.empty() || t.size() < best.size()) best = t;
                               });
                               return best;
                             }));
}

Strategy strategy_from_cover(const FiniteSpace& space, const Cover& cover) {
  if (cover.over() != space.carrier()) throw MismatchedCarrier("cover is not over the carrier");
  return Strategy::validated(space, tabulate(space, [&](PointSet s) {
                               for (PointSet u : cover.elements()) {
                                 PointSet t = u & s;
                                 if (!t.empty() && is_relatively_open(space, s, t)) return t;
                               }
                               throw InvalidStrategy("cover is not exhaustive at " + s.str());
                             }));
}

PointSet phi_derivative(const Strategy& phi, PointSet s) { return s - phi(s); }

std::vector<PointSet> phi_derivative_chain(const Strategy& phi, PointSet s) {
  std::vector<PointSet> chain;
  for (; !s.empty(); s = phi_derivative(phi, s)) chain.push_back(s);
  return chain;
}

// ---------------------------------------------------------------------------
// Game trees

std::vector<PointSet> game_successors(const Strategy& phi, PointSet s) {
  const FiniteSpace& space = phi.space();
  const PointSet t = phi(s);
  const PointSet d = s - t;
  std::set<PointSet> out;
  if (!d.empty()) out.insert(d);
  for_each_subset(t, [&](PointSet v) {
    if (v.empty() || !is_relatively_open(space, s, v)) return;
    PointSet c = relative_closure(space, s, v);
    if (!c.meets(d)) out.insert(c);
  });
  return {out.begin(), out.end()};
}

namespace {

void add_node(std::vector<TreeNode>& nodes, PointSet label, int parent) {
  nodes.push_back(TreeNode{label, parent, {}});
  if (nodes.size() > budget().max_tree_nodes) {
    throw BudgetExceeded("game tree exceeds " + std::to_string(budget().max_tree_nodes) + " nodes");
  }
}

}  // namespace

CoverTree game_tree(const Strategy& phi, std::size_t depth_budget) {
  std::vector<TreeNode> nodes;
  std::vector<std::size_t> depth;
  add_node(nodes, phi.space().carrier(), -1);
  depth.push_back(0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (depth[k] >= depth_budget) continue;
    for (PointSet next : game_successors(phi, nodes[k].label)) {
      add_node(nodes, next, static_cast<int>(k));
      depth.push_back(depth[k] + 1);
    }
  }
  return CoverTree(std::move(nodes));
}

CoverTree strategy_tree(const Strategy& phi, PointSet root) {
  std::vector<TreeNode> nodes;
  add_node(nodes, root, -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (PointSet next : game_successors(phi, nodes[k].label)) {
      if (next != nodes[k].label) add_node(nodes, next, static_cast<int>(k));
    }
  }
  return CoverTree(std::move(nodes));
}

RefiningSubtree cover_refining_subtree(const Strategy& phi, const Cover& g) {
  if (g.over() != phi.space().carrier()) throw MismatchedCarrier("G is not over the carrier");
  RefiningSubtree out;
  std::vector<TreeNode> nodes;
  add_node(nodes, phi.space().carrier(), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const PointSet s = nodes[k].label;
    bool small = std::any_of(g.elements().begin(), g.elements().end(),
                             [&](PointSet u) { return s.subset_of(u); });
    if (small) continue;
    PointSet covered;
    for (PointSet next : game_successors(phi, s)) {
      if (next == s) continue;
      covered |= next;
      add_node(nodes, next, static_cast<int>(k));
    }
    if (covered != s) out.deficits.emplace_back(s, s - covered);
  }
  out.tree = CoverTree(std::move(nodes));
  return out;
}

GameResult play_game(const Strategy& phi,
                     const std::function<PointSet(std::size_t, std::optional<PointSet>)>& player_one,
                     std::size_t round_budget) {
  const FiniteSpace& space = phi.space();
  GameResult out;
  out.cluster = space.carrier();
  std::optional<PointSet> last;
  for (std::size_t round = 1; round <= round_budget; ++round) {
    PointSet s = player_one(round, last);
    const std::string tag = "player I, round " + std::to_string(round) + ": ";
    if (s.empty()) throw IllegalMove(tag + "S must be non-empty");
    if (!s.subset_of(last ? *last : space.carrier())) {
      throw IllegalMove(tag + s.str() + " is not inside " + (last ? *last : space.carrier()).str());
    }
    PointSet t = phi(s);
    if (t.empty() || !is_relatively_open(space, s, t)) {
      throw IllegalMove("player II, round " + std::to_string(round) + ": " + t.str() +
                        " is not a non-empty open subset of " + s.str());
    }
    out.rounds.push_back({s, t});
    out.cluster &= space.closure(t);
    last = t;
  }
  out.ii_wins = !out.cluster.empty();
  return out;
}

PartitionCompleteness is_partition_complete(const FiniteSpace& space) {
  PartitionCompleteness out;
  out.exhaustive_cover = Cover(space.carrier(), space.neighbourhoods());

  std::map<PointSet, PointSet> classes;  // U_x -> points with that U_x
  for (int x = 0; x < space.size(); ++x) classes[space.neighbourhood(x)] |= PointSet::singleton(x);
  std::vector<std::pair<PointSet, PointSet>> blocks(classes.begin(), classes.end());
  std::stable_sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
    return a.first.size() < b.first.size();
  });
  std::vector<PointSet> partition;
  for (const auto& [u, block] : blocks) partition.push_back(block);
  const Cover as_cover(space.carrier(), partition);

  auto order = left_open_ordering(space, as_cover);
  PointSet prefix;
  bool left_open = true;
  for (PointSet block : partition) {
    prefix |= block;
    left_open = left_open && space.is_open(prefix);
  }
  out.left_open_partition = left_open ? partition : order.value_or(std::vector<PointSet>{});
  out.partition_complete = (left_open || order.has_value()) &&
                           is_exhaustive(space, out.exhaustive_cover) &&
                           is_complete_sequence(space, {out.exhaustive_cover}) &&
                           is_complete_sequence(space, {as_cover});
  return out;
}

}  // namespace fincov
