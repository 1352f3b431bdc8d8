#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace khess {

struct PropertySuiteOptions {
  int trials = 1000;
  std::uint64_t seed = 42;
  int max_dimension = 8;  ///< n is drawn from [2, max_dimension]
};

/// Outcome of one property over the seeded corpus. `worst` is the largest
/// observed violation measure; the property passes when worst <= threshold
/// and no structural check failed.
struct PropertyResult {
  std::string name;
  int trials = 0;
  double worst = 0.0;
  double threshold = 0.0;
  bool passed = true;
  std::string detail;
};

struct PropertySuiteReport {
  PropertySuiteOptions options;
  std::vector<PropertyResult> results;
  bool vacuous() const { return options.trials == 0; }
  bool passed() const;
};

/// Runs the symmetric-function identities and inequalities on seeded random
/// corpora: contraction identities, dual-route sigma_k, derivative vs finite
/// differences, positive definiteness of the quotient derivative,
/// Newton-MacLaurin (both forms) and the quotient ratio bounds.
PropertySuiteReport run_property_suite(const PropertySuiteOptions& options);

}  // namespace khess
