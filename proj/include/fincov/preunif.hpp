#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fincov/cover.hpp"
#include "fincov/space.hpp"

namespace fincov {

/// How a basis generates its members.
///   filter:    V is a member iff some finite meet of basis covers refines V.
///   prefilter: V is a member iff a single basis cover refines V.
enum class Mode { filter, prefilter };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// A pre-uniformity presented by a finite basis of covers of the carrier.
///
/// Basis covers are reduced and duplicates dropped; the first occurrence keeps
/// its position, so indices are stable for a given input list.
class PreUniformity {
public:
  /// Throws EmptyInput for an empty basis and MismatchedCarrier when a basis
  /// cover is not over the full carrier.
  PreUniformity(FiniteSpace space, std::vector<Cover> basis, Mode mode = Mode::filter);

  const FiniteSpace& space() const { return space_; }
  const std::vector<Cover>& basis() const { return basis_; }
  Mode mode() const { return mode_; }
  PointSet carrier() const { return space_.carrier(); }

  /// Meet of the listed basis covers; {X} for an empty list.
  Cover meet_of(const std::vector<std::size_t>& indices) const;
  /// Meet of the whole basis. In filter mode this is the finest member.
  Cover meet_of_all() const;

  bool operator==(const PreUniformity&) const = default;

private:
  FiniteSpace space_;
  std::vector<Cover> basis_;
  Mode mode_;
};

/// Enumerates non-empty strictly increasing index lists over {0..n-1} in
/// (length, lexicographic) order and returns the first accepted one.
/// Lists longer than `max_length` are not tried. Throws BudgetExceeded after
/// budget().max_enumerated_covers candidates.
std::optional<std::vector<std::size_t>> first_index_list(
    std::size_t n, std::size_t max_length,
    const std::function<bool(const std::vector<std::size_t>&)>& accept);

struct Membership {
  bool member = false;
  /// Basis indices whose meet refines V; minimal in (length, lex) order.
  std::vector<std::size_t> witness;
};

/// Throws MismatchedCarrier when V is not over the carrier.
Membership membership(const PreUniformity& mu, const Cover& v);
/// Same relation for a cover of a subset A: some member restricted to A refines V.
Membership restricted_membership(const PreUniformity& mu, const Cover& v);

/// Provenance of one derived basis cover: the meet of `parents` (indices into
/// the previous stage) with element k intersected by basis cover choice[k] of
/// the second argument.
struct Provenance {
  std::vector<std::size_t> parents;
  std::vector<std::size_t> choice;
};

struct Derived {
  PreUniformity result;
  std::vector<Provenance> provenance;  // parallel to result.basis()
};

/// mu/nu: all covers {U_i & V^i_j} with U ranging over basis covers of mu
/// (filter mode: meets of up to budget().meet_depth of them) and each
/// element independently choosing a basis cover of nu. The result keeps the
/// mode of mu. Throws MismatchedCarrier or BudgetExceeded.
Derived derivative_with_provenance(const PreUniformity& mu, const PreUniformity& nu);
PreUniformity derivative(const PreUniformity& mu, const PreUniformity& nu);

/// Same generated family: every basis cover of each is a member of the other.
bool same_filter(const PreUniformity& a, const PreUniformity& b);

/// Drops basis covers strictly refined by another basis cover (and all but
/// the first of each equivalence class). Generated members do not change.
Derived prune(const Derived& d);

struct DerivationTrace {
  /// stages[0] is mu; stages[k+1] is the pruned derivative of stages[k].
  std::vector<PreUniformity> stages;
  /// provenance[k] describes stages[k+1].
  std::vector<std::vector<Provenance>> provenance;
  /// Least k with stage k+1 generating the same family as stage k.
  std::size_t fixed_stage = 0;
  /// Built with mu^(k)/mu^(k); choices then index the previous stage.
  bool fast = false;
};

struct LambdaResult {
  PreUniformity lambda;
  DerivationTrace trace;
};

/// Iterates mu^(k+1) = mu^(k)/mu (or mu^(k)/mu^(k) with `fast`) until the
/// generated family stops changing. Certificates for the new covers come
/// from lambda_certificates() in cert.hpp.
LambdaResult lambda_coreflection(const PreUniformity& mu, bool fast = false);

/// First stage of the trace at which V is a member, if any.
std::optional<std::size_t> entry_stage(const DerivationTrace& trace, const Cover& v);

struct Supercompleteness {
  bool supercomplete = false;
  std::optional<Cover> counterexample;
};

/// Every open cover of the space is a member. Equivalent to the reduced
/// minimal neighbourhood cover being a member, which is what is checked;
/// see supercomplete_by_enumeration for the direct version.
Supercompleteness is_supercomplete(const PreUniformity& mu);
/// Checks every reduced open cover. Throws BudgetExceeded when there are too many.
Supercompleteness supercomplete_by_enumeration(const PreUniformity& mu);

/// mu-members restricted to closed pieces, patched together. V is a member
/// iff for each point x some mu-member refines V on cl{x}.
PreUniformity metric_fine(const PreUniformity& mu);
/// Direct membership test for the metric-fine modification.
bool metric_fine_member(const PreUniformity& mu, const Cover& v);

struct ProductPreUniformity {
  ProductSpace product;
  PreUniformity mu;
};

/// Filter generated by the pullbacks of every factor basis cover, listed by
/// factor and then by cover. Throws BudgetExceeded or EmptyInput.
ProductPreUniformity product_preuniformity(const std::vector<PreUniformity>& factors);

struct LambdaNeighbourhood {
  bool neighbourhood = false;
  std::optional<Cover> witness;
};

/// Some V in lambda(mu) with St(A, V) inside N. Throws PreconditionFailed
/// unless A is inside N.
LambdaNeighbourhood is_lambda_neighbourhood(const PreUniformity& mu, PointSet a, PointSet n);

/// Members that are finite covers. Every cover here is finite, so this is mu.
PreUniformity finite_cover_part(const PreUniformity& mu);

/// Pullback of a factor cover along projection i.
Cover pullback_cover(const ProductSpace& p, std::size_t i, const Cover& c);

}  // namespace fincov
