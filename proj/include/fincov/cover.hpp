#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fincov/pointset.hpp"
#include "fincov/space.hpp"

namespace fincov {

/// A finite family of non-empty subsets whose union contains `over`.
///
/// Elements are kept sorted and deduplicated; empty elements are stripped.
/// The family is not reduced automatically: see reduced().
class Cover {
public:
  Cover() = default;
  /// Throws PreconditionFailed if an element leaves `over` or the elements
  /// do not cover it.
  Cover(PointSet over, std::vector<PointSet> elements);
  /// Cover of the full carrier {0..n-1}.
  static Cover of(int n, std::vector<PointSet> elements) {
    return Cover(PointSet::full(n), std::move(elements));
  }

  PointSet over() const { return over_; }
  const std::vector<PointSet>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  PointSet element(std::size_t k) const { return elements_[k]; }
  bool contains(PointSet s) const;

  bool operator==(const Cover&) const = default;
  auto operator<=>(const Cover&) const = default;

  std::string str() const;

private:
  PointSet over_;
  std::vector<PointSet> elements_;
};

/// Drops elements strictly contained in another element.
Cover reduced(const Cover& u);

/// U refines V: every element of U lies inside some element of V.
/// Throws MismatchedCarrier when the covers are over different sets.
bool refines(const Cover& u, const Cover& v);
/// Mutual refinement.
bool equivalent(const Cover& u, const Cover& v);

/// Pairwise intersections.
Cover meet(const Cover& u, const Cover& v);
Cover meet_all(const std::vector<Cover>& covers);
/// {U & A} as a cover of A (A subset of U.over()).
Cover restrict_to(const Cover& u, PointSet a);
/// All unions of non-empty subfamilies.
Cover directed(const Cover& u);

/// St(A, V): union of the elements of V meeting A.
PointSet star(PointSet a, const Cover& v);
/// {St(U, U) : U in U}
Cover star_cover(const Cover& u);
/// U star-refines V: the star cover of U refines V.
bool star_refines(const Cover& u, const Cover& v);
/// Two-step star refinement: some W with U <* W <* V.
bool double_star_refines(const Cover& u, const Cover& v);

bool is_open_cover(const FiniteSpace& space, const Cover& u);
/// {U_x} over all points, reduced.
Cover minimal_neighbourhood_cover(const FiniteSpace& space);
/// Components of the space as a cover.
Cover component_partition(const FiniteSpace& space);

/// Every antichain of non-empty open sets covering the carrier, each as a
/// reduced Cover, in sorted order. Throws BudgetExceeded past
/// budget().max_enumerated_covers.
std::vector<Cover> reduced_open_covers(const FiniteSpace& space);

struct NormalityResult {
  bool normal = false;
  /// On success: W_0, W_1, ..., W_k with W_{j+1} <* W_j, W_k <* W_m for some
  /// m <= k (so the chain continues forever), and W_0 refining V.
  std::vector<Cover> chain;
};

/// Greatest fixed point over all reduced open covers: repeatedly drop covers
/// with no surviving star-refiner; V is normal iff a survivor refines it.
NormalityResult normal_cover_fixed_point(const FiniteSpace& space, const Cover& v);
/// Closed form: V is normal iff the component partition refines it.
NormalityResult normal_cover_by_components(const FiniteSpace& space, const Cover& v);
/// Uses the fixed point when the open-cover lattice fits the enumeration
/// budget and the component criterion otherwise.
NormalityResult is_normal_cover(const FiniteSpace& space, const Cover& v);

/// Every non-empty S has some U with U & S non-empty and relatively open in S.
bool is_exhaustive(const FiniteSpace& space, const Cover& u);

/// An ordering of the blocks whose prefix unions are all open, if any.
/// Throws NotAPartition when the blocks overlap or miss points.
std::optional<std::vector<PointSet>> left_open_ordering(const FiniteSpace& space,
                                                        const Cover& partition);

/// The list is read as the sequence that repeats its last cover forever.
/// Checks every choice of one element per cover: choices with non-empty
/// common intersection must have closures with non-empty intersection.
bool is_complete_sequence(const FiniteSpace& space, const std::vector<Cover>& covers);

}  // namespace fincov
