#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fincov {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define FINCOV_ERROR(Name)                                   \
  class Name : public Error {                                \
  public:                                                    \
    explicit Name(const std::string& what)                   \
        : Error(std::string(#Name) + ": " + what) {}         \
  }

FINCOV_ERROR(NotATopology);
FINCOV_ERROR(BudgetExceeded);
FINCOV_ERROR(MismatchedCarrier);
FINCOV_ERROR(NotAPartition);
FINCOV_ERROR(NotInLambda);
FINCOV_ERROR(PreconditionFailed);
FINCOV_ERROR(NotKScattered);
FINCOV_ERROR(InvalidStrategy);
FINCOV_ERROR(IllegalMove);
FINCOV_ERROR(InvalidPerversity);
FINCOV_ERROR(EmptyInput);
FINCOV_ERROR(SupportsNotDisjoint);
FINCOV_ERROR(HypothesisViolated);
FINCOV_ERROR(NotProperSubset);
FINCOV_ERROR(NotNormal);
FINCOV_ERROR(NotSupercomplete);
FINCOV_ERROR(InputError);

#undef FINCOV_ERROR

/// Caps that keep exhaustive enumeration tractable. Set once at startup
/// (the CLI does this from --budget); library code only reads it.
struct Budget {
  int max_space_points = 20;
  int max_product_points = 64;
  std::size_t max_enumerated_covers = 200000;
  std::size_t max_choice_functions = 1000000;
  std::size_t max_tree_nodes = 200000;
  int meet_depth = 3;
};

const Budget& budget();
void set_budget(const Budget& b);

}  // namespace fincov
