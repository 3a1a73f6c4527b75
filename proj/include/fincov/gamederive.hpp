#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fincov/cert.hpp"
#include "fincov/cover.hpp"
#include "fincov/space.hpp"

namespace fincov {

// ---------------------------------------------------------------------------
// Perversities and perverse products

/// A non-increasing, eventually zero sequence of non-negative integers,
/// indexed from 1. Trailing zeros are not stored.
class Perversity {
public:
  Perversity() = default;
  /// Throws InvalidPerversity on a negative or increasing entry.
  explicit Perversity(std::vector<int> entries);

  /// p(i) for i >= 1; zero past the stored entries.
  int operator()(std::size_t i) const;
  const std::vector<int>& entries() const { return entries_; }
  /// The first m coordinates, for a product of m factors.
  std::vector<int> restrict_to(std::size_t m) const;
  /// "(2,1)"; the zero perversity is "()".
  std::string str() const;

  bool operator==(const Perversity&) const = default;
  auto operator<=>(const Perversity&) const = default;

private:
  std::vector<int> entries_;
};

/// p_1 = 0 and p_{n+1} raises coordinate k = min{j : i_j = i_{j+1}} of p_n.
std::vector<Perversity> standard_perversities(std::size_t n);

/// Coordinatewise order.
std::partial_ordering perversity_order(const Perversity& p, const Perversity& q);

/// Unique minimum, and the predecessors of each member form a chain.
bool perversity_set_is_tree(const std::vector<Perversity>& ps);

struct PerverseNode {
  std::vector<std::size_t> factors;  // node index in each factor tree
  std::vector<int> levels;           // depth of each factor node
  PointSet label;                    // product box (set-theoretic variant only)
};

struct PerverseProduct {
  std::vector<PerverseNode> nodes;  // sorted by number of predecessors
  /// predecessors[k]: nodes strictly below k in the coordinatewise tree order.
  std::vector<std::vector<std::size_t>> predecessors;
  /// Immediate successors of each node.
  std::vector<std::vector<std::size_t>> successors;

  std::size_t level(std::size_t k) const { return predecessors[k].size(); }
};

/// Tuples of factor nodes whose level vector is the restriction of some
/// perversity in `ps`, with at most `depth_budget` predecessors. Throws
/// BudgetExceeded past budget().max_tree_nodes candidate tuples.
PerverseProduct perverse_product(const std::vector<CoverTree>& trees,
                                 const std::vector<Perversity>& ps, std::size_t depth_budget);
/// Same, with each node labelled by the box of its factor labels.
PerverseProduct set_theoretic_perverse_product(const ProductSpace& space,
                                               const std::vector<CoverTree>& trees,
                                               const std::vector<Perversity>& ps,
                                               std::size_t depth_budget);

/// Unique minimum and linearly ordered predecessor sets.
bool is_tree(const PerverseProduct& product);

// ---------------------------------------------------------------------------
// K-derivatives and decomposition trees

/// A class of spaces, tested on subsets of a space with the relative topology.
struct KClass {
  std::string name;
  std::function<bool(const FiniteSpace&, PointSet)> contains;
};

KClass k_singletons();
KClass k_discrete();
KClass k_all();
/// "singletons", "discrete" or "all"; throws InputError otherwise.
KClass k_class(const std::string& name);

/// Points of S with no K-neighbourhood in S, where S carries the relative
/// topology. A neighbourhood of x in S contains U_x & S, and the built-in
/// classes are hereditary, so U_x & S decides.
PointSet k_derivative(const FiniteSpace& space, const KClass& k, PointSet s);
/// Derivatives D^0 = S, D^1, ... down to the empty set. Throws
/// NotKScattered if the sequence gets stuck on a non-empty set.
std::vector<PointSet> k_derivative_chain(const FiniteSpace& space, const KClass& k, PointSet s);
/// Smallest r with D^r(X) empty. Throws NotKScattered.
int k_rank(const FiniteSpace& space, const KClass& k);
/// Rank of S as a subspace.
int k_rank_of(const FiniteSpace& space, const KClass& k, PointSet s);
bool is_k_scattered(const FiniteSpace& space, const KClass& k);

/// Where the successor sets U of a node S live:
///   relative: closed in the subspace S - T with non-empty interior there;
///   ambient:  closed in S with non-empty interior in S, inside S - T.
enum class Convention { relative, ambient };

/// Root X; the successors of a node S of rank r > 1 are T = D^{r-1}(S) and
/// every closed U in S - T (per the convention) with non-empty interior and
/// rank below r, each expanded recursively. T is always a leaf. Labels are
/// subsets of the carrier; witnesses are empty. Throws NotKScattered, or
/// BudgetExceeded beyond `depth_budget` levels or budget().max_tree_nodes.
CoverTree decomposition_tree(const FiniteSpace& space, const KClass& k, std::size_t depth_budget,
                             Convention convention = Convention::relative);

// ---------------------------------------------------------------------------
// Stationary strategies and the game

/// A choice phi(S) for every non-empty S: non-empty and relatively open in S.
class Strategy {
public:
  const FiniteSpace& space() const { return space_; }
  PointSet operator()(PointSet s) const;
  const std::vector<PointSet>& table() const { return table_; }

  /// Throws InvalidStrategy naming the first non-empty S with a missing,
  /// empty, escaping or non-open choice.
  static Strategy from_table(const FiniteSpace& space, const std::map<PointSet, PointSet>& table);

private:
  Strategy(FiniteSpace space, std::vector<PointSet> table);
  static Strategy validated(FiniteSpace space, std::vector<PointSet> table);
  FiniteSpace space_;
  std::vector<PointSet> table_;  // indexed by the bits of S
  friend Strategy least_point_strategy(const FiniteSpace& space);
  friend Strategy smallest_neighbourhood_strategy(const FiniteSpace& space);
  friend Strategy strategy_from_cover(const FiniteSpace& space, const Cover& cover);
};

/// phi(S) = U_x & S for the least x in S.
Strategy least_point_strategy(const FiniteSpace& space);
/// phi(S) = U_x & S for the least x in S minimising |U_x & S|.
Strategy smallest_neighbourhood_strategy(const FiniteSpace& space);
/// phi(S) = U & S for the first element U of the cover with U & S non-empty
/// and relatively open in S. Throws InvalidStrategy when the cover is not
/// exhaustive at some S.
Strategy strategy_from_cover(const FiniteSpace& space, const Cover& cover);

/// S - phi(S)
PointSet phi_derivative(const Strategy& phi, PointSet s);
/// S, S - phi(S), ... down to the empty set (inclusive of S, exclusive of the empty set).
std::vector<PointSet> phi_derivative_chain(const Strategy& phi, PointSet s);

/// Successors of S in the game tree: D = S - phi(S) when non-empty, and
/// cl_S(V) for every non-empty V inside phi(S), relatively open in S, whose
/// closure in S misses D. Sorted, without repeats.
std::vector<PointSet> game_successors(const Strategy& phi, PointSet s);
/// Game tree from the carrier, expanded to `depth_budget` levels.
CoverTree game_tree(const Strategy& phi, std::size_t depth_budget);
/// The game tree below `root` keeping only successors that are proper
/// subsets, so it is finite. Throws BudgetExceeded past budget().max_tree_nodes.
CoverTree strategy_tree(const Strategy& phi, PointSet root);

struct RefiningSubtree {
  CoverTree tree;
  /// Expanded nodes whose proper successors do not cover them: (node, missed points).
  std::vector<std::pair<PointSet, PointSet>> deficits;
};

/// Expands the game tree from the carrier through successors that are proper
/// subsets, stopping at nodes inside a single element of G. Without deficits
/// the ends refine G and so directed(G).
RefiningSubtree cover_refining_subtree(const Strategy& phi, const Cover& g);

struct Round {
  PointSet s;  // player I
  PointSet t;  // player II, phi(s)
};

struct GameResult {
  std::vector<Round> rounds;
  bool ii_wins = false;
  PointSet cluster;  // intersection of the closures of the T's
};

/// Player I supplies S_1, then S_{n+1} given T_n. Throws IllegalMove naming
/// the player and the rule broken.
GameResult play_game(const Strategy& phi,
                     const std::function<PointSet(std::size_t round, std::optional<PointSet> last_t)>& player_one,
                     std::size_t round_budget);

struct PartitionCompleteness {
  bool partition_complete = false;
  /// The constant sequence of this exhaustive cover (every U_x).
  Cover exhaustive_cover;
  /// The constant sequence of this left-open partition (points with equal
  /// U_x, ordered by |U_x|), listed in a left-open order.
  std::vector<PointSet> left_open_partition;
};

/// Builds and validates the witnesses; fails only if validation does.
PartitionCompleteness is_partition_complete(const FiniteSpace& space);

}  // namespace fincov
