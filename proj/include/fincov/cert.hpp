#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fincov/cover.hpp"
#include "fincov/preunif.hpp"

namespace fincov {

/// A finite tree of labelled subsets.
///
/// Node 0 is the root and every other node's parent has a smaller index.
/// An internal node p carries a witness: strictly increasing basis indices of
/// a pre-uniformity whose meet W splits label(p) into its children.
struct TreeNode {
  PointSet label;
  int parent = -1;
  std::vector<std::size_t> witness;

  bool operator==(const TreeNode&) const = default;
};

class CoverTree {
public:
  CoverTree() = default;
  explicit CoverTree(std::vector<TreeNode> nodes);

  /// A single root with no children.
  static CoverTree leaf(PointSet label);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& mutable_nodes() { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const TreeNode& node(std::size_t k) const { return nodes_[k]; }
  PointSet root_label() const { return nodes_.at(0).label; }
  std::vector<std::size_t> children(std::size_t k) const;
  bool is_leaf(std::size_t k) const;
  std::size_t depth() const;

  bool operator==(const CoverTree&) const = default;

private:
  std::vector<TreeNode> nodes_;
};

/// Labels of the maximal nodes, as a cover of the root label.
Cover ends(const CoverTree& tree);

/// The non-empty sets L & w for w in W, sorted and deduplicated.
std::vector<PointSet> traces(PointSet label, const Cover& w);

/// The tree rooted at `label`: the single node `label` split by `witness`.
/// Throws PreconditionFailed if `label` leaves the carrier.
CoverTree split(const PreUniformity& mu, PointSet label, const std::vector<std::size_t>& witness);

/// Follows the witnesses of `tree` starting from `label` (inside the root
/// label). Where two children trace to the same set only the first is kept.
CoverTree replay(const PreUniformity& mu, const CoverTree& tree, PointSet label);

/// Replaces each leaf for which `below` returns a tree by that tree, whose
/// root label must equal the leaf label.
CoverTree graft(const CoverTree& tree,
                const std::function<std::optional<CoverTree>(PointSet leaf)>& below);

/// Splices out nodes whose only child repeats their label, orders siblings
/// by label, and replaces each witness by the first list in (length, lex)
/// order producing the same children. Throws BudgetExceeded past
/// budget().max_tree_nodes.
CoverTree canonical(const PreUniformity& mu, const CoverTree& tree);

/// A tree whose ends refine `target`. The root label is target.over(),
/// which is the carrier for plain membership and a subset for relative
/// membership.
struct Certificate {
  CoverTree tree;
  Cover target;

  bool operator==(const Certificate&) const = default;
};

struct Verdict {
  bool ok = true;
  int node = -1;  // offending node, -1 for whole-tree conditions
  std::string reason;
};

/// Independent check of a certificate against the presentation of mu:
/// tree shape, labels inside the carrier, root label equal to target.over(),
/// children of each internal node equal to the traces of its witness meet,
/// witnesses minimal in (length, lex) order (single indices in prefilter
/// mode), leaves without witnesses, and ends refining the target.
Verdict verify_certificate(const PreUniformity& mu, const Certificate& cert);

/// Replays the derivation trace from the first stage where V is a member.
/// Throws NotInLambda when V is not in lambda(mu), PreconditionFailed for a
/// trace built with the fast iteration.
Certificate certify_membership(const PreUniformity& mu, const Cover& v);
Certificate certify_membership(const DerivationTrace& trace, const Cover& v);
/// V is a cover of a subset A; certifies that some lambda member restricted
/// to A refines it. The tree is rooted at A.
Certificate certify_relative(const DerivationTrace& trace, const Cover& v);

/// One certificate per basis cover of lambda(mu) that is not a member of mu.
std::vector<Certificate> lambda_certificates(const LambdaResult& result);

/// The cover {N, X - A}. A cover refines it exactly when its star at A lies in N.
Cover neighbourhood_target(PointSet carrier, PointSet a, PointSet n);

struct NeighbourhoodEntry {
  PointSet element;      // V, an element of the relative cover
  PointSet neighbourhood;  // N_V, containing V
  Certificate certificate;  // target refines neighbourhood_target(X, V, N_V)
  /// Certificate rooted at N_V whose target refines G restricted to N_V.
  std::optional<Certificate> uniform;
};

struct Induction {
  PointSet total;  // union of the N_V
  Certificate total_certificate;  // target neighbourhood_target(X, A, total)
  /// Present when G was given: the least lambda neighbourhood N of A and a
  /// certificate rooted at N for G restricted to N.
  std::optional<PointSet> n;
  std::optional<Certificate> n_certificate;
  std::optional<Certificate> g_certificate;
};

/// Grafts each element's neighbourhood certificate below the ends of a
/// lambda tree that meet A. Throws PreconditionFailed naming the clause:
/// "relative cover" (not in lambda restricted to A, or entries do not match
/// its elements), "neighbourhood" (a certificate fails or misses its target),
/// "uniform" (a G certificate fails), or "second clause" (no lambda
/// neighbourhood of A carries G).
Induction neighbourhood_induction(const PreUniformity& mu, PointSet a, const Cover& relative_cover,
                                  const std::vector<NeighbourhoodEntry>& entries,
                                  const std::optional<Cover>& g = std::nullopt);

struct NoetherianVerdict {
  bool noetherian = true;  // within the depth budget
  std::vector<PointSet> chain;  // a chain of length `budget` otherwise
};

/// Depth-first exploration of a lazily generated tree. Throws BudgetExceeded
/// after budget().max_tree_nodes visited nodes.
NoetherianVerdict is_noetherian_within(
    const std::function<std::vector<PointSet>(PointSet)>& successors, PointSet root,
    std::size_t depth_budget);

}  // namespace fincov
