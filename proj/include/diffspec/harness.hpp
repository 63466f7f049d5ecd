#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace diffspec {

struct ClaimCheck {
  std::string claim_id;
  std::string anchor;  // the statement being checked
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double runtime_ms = 0.0;
  std::string detail;
};

// A named invariant evaluated for one seed. Returns an empty string on
// success and a description of the violation otherwise.
struct PropertyCheck {
  std::string name;
  std::function<std::string(std::uint64_t seed)> run;
};

// Library invariants checked by the property-suite claim.
std::vector<PropertyCheck> builtin_properties();

struct HarnessOptions {
  std::uint64_t seed = 0;
  // Extra invariants (e.g. of the command line tool) folded into the
  // property suite.
  std::vector<PropertyCheck> extra_properties;
  // Called after each claim finishes.
  std::function<void(const ClaimCheck&)> on_claim;
};

// Runs every claim in a fixed order. Deterministic in everything except
// runtime_ms.
std::vector<ClaimCheck> run_all_claims(const HarnessOptions& options);
std::vector<ClaimCheck> run_all_claims(std::uint64_t seed);

std::vector<std::string> claim_ids();

// Header: claim_id,anchor,measured,tolerance,pass,ms
void write_claims_csv(std::ostream& out, const std::vector<ClaimCheck>& claims);

// Statistics used by the claims.
double spearman(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// True when every step up is at most `jitter` and the curve ends within
// `endpoint_tol` of zero.
bool decreases_to_zero(std::span<const double> curve, double jitter, double endpoint_tol);

}  // namespace diffspec
