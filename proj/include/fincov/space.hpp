#pragma once

#include <vector>

#include "fincov/errors.hpp"
#include "fincov/pointset.hpp"

namespace fincov {

/// A finite topological space on {0..n-1}.
///
/// Stored through the minimal open neighbourhood U_x of every point; a set is
/// open exactly when it contains U_x for each of its points. Instances are
/// immutable once validated.
class FiniteSpace {
public:
  /// Validates `opens` (must contain the empty set and the carrier and be
  /// closed under binary union and intersection). Throws NotATopology.
  static FiniteSpace from_opens(int n, std::vector<PointSet> opens);
  /// Validates that x is in U_x and that y in U_x implies U_y subset of U_x.
  static FiniteSpace from_neighbourhoods(std::vector<PointSet> neighbourhoods);

  int size() const { return static_cast<int>(nbhd_.size()); }
  PointSet carrier() const { return PointSet::full(size()); }
  PointSet neighbourhood(int x) const { return nbhd_[static_cast<std::size_t>(x)]; }
  const std::vector<PointSet>& neighbourhoods() const { return nbhd_; }

  bool is_open(PointSet s) const;
  bool is_closed(PointSet s) const { return is_open(carrier() - s); }

  /// The smallest open set containing `s`.
  PointSet open_hull(PointSet s) const;
  PointSet interior(PointSet s) const;
  PointSet closure(PointSet s) const;

  /// All open sets, sorted ascending. Throws BudgetExceeded when the family
  /// is larger than budget().max_enumerated_covers.
  std::vector<PointSet> opens() const;
  std::vector<PointSet> closed_sets() const;

  bool operator==(const FiniteSpace& o) const { return nbhd_ == o.nbhd_; }

private:
  explicit FiniteSpace(std::vector<PointSet> nbhd) : nbhd_(std::move(nbhd)) {}
  std::vector<PointSet> nbhd_;
};

FiniteSpace sierpinski();
FiniteSpace discrete_space(int n);
FiniteSpace indiscrete_space(int n);
/// Every topology on {0..n-1} (n <= 5), in a fixed enumeration order.
std::vector<FiniteSpace> all_topologies(int n);

PointSet closure(const FiniteSpace& space, PointSet s);
PointSet interior(const FiniteSpace& space, PointSet s);
/// int(cl(S))
PointSet regular_open_extension(const FiniteSpace& space, PointSet s);
bool is_regular_open(const FiniteSpace& space, PointSet s);
/// Points and closed sets not containing them have disjoint open
/// neighbourhoods. No separation axiom is assumed.
bool is_regular(const FiniteSpace& space);

/// T is relatively open in S (T subset of S).
bool is_relatively_open(const FiniteSpace& space, PointSet s, PointSet t);
PointSet relative_closure(const FiniteSpace& space, PointSet s, PointSet t);
PointSet relative_interior(const FiniteSpace& space, PointSet s, PointSet t);

/// Connected components, ordered by least point. These are the finest
/// clopen partition of the space.
std::vector<PointSet> components(const FiniteSpace& space);

struct Subspace {
  FiniteSpace space;
  /// embedding[k] is the ambient point that subspace point k maps to.
  std::vector<int> embedding;

  PointSet to_ambient(PointSet local) const;
  PointSet to_local(PointSet ambient) const;
};

Subspace subspace(const FiniteSpace& space, PointSet a);

/// Finite product with the box topology. Factor 0 is the fastest-varying
/// coordinate of the point index.
class ProductSpace {
public:
  const FiniteSpace& space() const { return space_; }
  const std::vector<FiniteSpace>& factors() const { return factors_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }

  int coordinate(int point, int factor) const;
  int point(const std::vector<int>& coords) const;
  std::vector<int> coordinates(int point) const;

  /// pi_i^{-1}[s]
  PointSet pullback(int factor, PointSet s) const;
  /// pi_i[s]
  PointSet project(PointSet s, int factor) const;
  /// The box of per-factor sets.
  PointSet box(const std::vector<PointSet>& sides) const;
  /// The smallest box containing `s`: its projections.
  std::vector<PointSet> sides(PointSet s) const;
  bool is_box(PointSet s) const;

  /// Sub-product over an ascending index list together with the map from
  /// the sub-product back to this product.
  ProductSpace subproduct(const std::vector<int>& indices) const;
  /// pi_F[s] as a subset of subproduct(indices).
  PointSet project_to(PointSet s, const std::vector<int>& indices) const;
  /// pi_F^{-1}[t] for t a subset of subproduct(indices).
  PointSet cylinder(PointSet t, const std::vector<int>& indices) const;

  friend ProductSpace product(const std::vector<FiniteSpace>& factors);

private:
  FiniteSpace space_ = discrete_space(1);
  std::vector<FiniteSpace> factors_;
  std::vector<int> strides_;
  std::vector<std::vector<PointSet>> fibres_;  // fibres_[i][v] = pi_i^{-1}[{v}]
};

/// Throws BudgetExceeded when the product has more than
/// budget().max_product_points points, EmptyInput for no factors.
ProductSpace product(const std::vector<FiniteSpace>& factors);

}  // namespace fincov
