#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fincov/cert.hpp"
#include "fincov/cover.hpp"
#include "fincov/preunif.hpp"
#include "fincov/space.hpp"

namespace fincov {

/// B = intersection of pi_i^{-1}[B_i] over the constrained factors.
/// Constraints equal to the whole factor are dropped, so the constrained
/// factors are exactly the support I(B).
class BasicSet {
public:
  /// Throws MismatchedCarrier for a factor index or side outside the product.
  BasicSet(const ProductSpace& product, std::map<int, PointSet> constraints);
  /// The smallest basic set containing `s`: the box of its projections.
  static BasicSet hull(const ProductSpace& product, PointSet s);

  const ProductSpace& product() const { return product_; }
  const std::map<int, PointSet>& constraints() const { return constraints_; }
  /// B_i, or the whole factor when unconstrained.
  PointSet side(int i) const;
  std::vector<int> support() const;
  PointSet realize() const;
  bool is_open() const;
  /// "{0:{1},2:{0,1}}"
  std::string str() const;

private:
  ProductSpace product_;
  std::map<int, PointSet> constraints_;
};

std::vector<int> support_of(const std::vector<BasicSet>& family);

struct IntersectionVerdict {
  bool nonempty = false;    // by the shared-support criterion
  std::vector<int> shared;  // I(B1) & I(B2)
  bool brute_force = false;  // realize and intersect
  bool agrees() const { return nonempty == brute_force; }
};

/// Throws EmptyInput if either set is empty.
IntersectionVerdict disjoint_support_intersection(const BasicSet& b1, const BasicSet& b2);

struct DenseVerdict {
  bool dense = false;       // closure of the union is the product
  PointSet closure;
  /// Every minimal neighbourhood U_x has a family whose support misses
  /// I(U_x). With finitely many families the lemma needs this; it is what
  /// infinitely many disjoint supports provide for free.
  bool escape = false;
  bool falsified() const { return escape && !dense; }
};

/// Families of basic sets with pairwise disjoint supports. Throws
/// SupportsNotDisjoint, EmptyInput for an empty family or basic set.
DenseVerdict dense_union_check(const std::vector<std::vector<BasicSet>>& families);

struct InclusionVerdict {
  bool included = false;  // G inside R
  /// Every x in G has a family whose support outside E misses I(U_x) outside E.
  bool escape = false;
  bool falsified() const { return escape && !included; }
};

/// G open, R regular open, each family made of basic subsets of R, supports
/// pairwise disjoint outside E, and pi_E of each family's union containing
/// pi_E[G]. Single-set families give the one-set form. Throws
/// HypothesisViolated naming the failing clause.
InclusionVerdict inclusion_lemma_check(const ProductSpace& product, PointSet g, PointSet r,
                                       const std::vector<int>& e,
                                       const std::vector<std::vector<BasicSet>>& families);

/// Non-empty basic subsets of S not contained in a larger basic subset of S.
/// With `open_only`, sides are open and maximality is among open boxes.
/// Throws BudgetExceeded past budget().max_enumerated_covers candidate boxes.
std::vector<BasicSet> maximal_basic_subsets(const ProductSpace& product, PointSet s,
                                            bool open_only = false);

struct Blocker {
  std::vector<int> indices;  // F(R), ascending
  /// For each set of indices to hit, the least member of F(R) hitting it.
  std::vector<std::pair<std::vector<int>, int>> hits;
};

/// Least-size, then lexicographically first, index set meeting every given
/// set. Throws PreconditionFailed if one of them is empty.
Blocker minimum_hitting_set(const std::vector<std::vector<int>>& sets);

/// F(R) meeting I(B) for every basic B inside R, found over the maximal ones.
/// Throws NotProperSubset for R = X, HypothesisViolated unless R is regular open.
Blocker finite_blocker(const ProductSpace& product, PointSet r);

/// F meeting, outside E, the support of every finite family of basic open
/// subsets of R whose union projects onto pi_E[G]. Throws HypothesisViolated
/// if G or R is not open, or G lies inside int(cl R).
Blocker finite_blocker_relative(const ProductSpace& product, PointSet g, PointSet r,
                                const std::vector<int>& e);

/// {int(cl R) : R in R}
Cover regular_open_cover_extension(const FiniteSpace& space, const Cover& r);

struct ExtensionVerdict {
  bool extension_refines = false;  // R* refines V
  bool directed_refines = false;   // (directed R)* refines directed V
};

/// Requires R an open cover, R refining V1 and V1 <** V; throws
/// HypothesisViolated naming the clause otherwise.
ExtensionVerdict extension_refinement_check(const FiniteSpace& space, const Cover& r,
                                            const Cover& v1, const Cover& v);

struct NormalCoverRun {
  ProductPreUniformity product;
  Cover r;                    // regular open refinement
  ExtensionVerdict r_check;   // its extension hypotheses, checked
  Cover g;                    // basic open cover
  std::vector<int> f;         // blocker index set, ascending
  std::optional<ProductPreUniformity> sub;  // product over F
  Cover w_f;                  // cover of the product over F
  std::optional<Certificate> t_f;  // for W_F against sub->mu
  CoverTree t0;               // T_F crossed with the other factors, extended below its ends
  std::vector<std::size_t> end_star_sizes;  // one entry per stage
  std::size_t stage_bound = 0;  // closed subsets of the product
  Certificate directed_certificate;  // for directed(V), in reduced form {X}
  Certificate certificate;           // for V
};

/// Runs the product construction at finite scale and returns certificates,
/// both verified, that directed(V) and V lie in lambda of the product
/// pre-uniformity. Throws NotSupercomplete, NotNormal, MismatchedCarrier,
/// BudgetExceeded.
NormalCoverRun normal_cover_certificate(const std::vector<PreUniformity>& factors, const Cover& v);

}  // namespace fincov
