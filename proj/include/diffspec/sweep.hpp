#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffspec/dsmi.hpp"

namespace diffspec {

// Parameter sweep over one generator or estimator setting.
//
// Config file: one `key = value` per line, `#` starts a comment. Keys:
//   family        blobs | tree | uniform_manifold | gaussian_manifold | psd_identity_mix
//   vary          name of the numeric parameter swept over
//   grid          comma-separated values for `vary`
//   methods       comma-separated subset of dse,cse,dsmi,csmi,dmee,knn,gaussian
//   seeds         comma-separated seeds (default 0)
//   sigma         positive number or `median` (default)
//   sigma_policy  global | subset
//   rotate        true | false (manifold families)
// and the numeric parameters listed in sweep_numeric_keys().
struct SweepConfig {
  std::string family = "blobs";
  std::string vary;
  std::vector<double> grid;
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds{0};
  std::optional<double> sigma;
  SigmaPolicy sigma_policy = SigmaPolicy::Global;
  bool rotate = true;
  std::map<std::string, double> numeric;  // overrides of the defaults
};

// Numeric keys with their defaults. `noise` is the blob/tree noise std or the
// manifold noise level; its default depends on the family (1, 0.05, 0).
const std::map<std::string, double>& sweep_numeric_keys();

struct SweepRow {
  std::string variable;
  double grid_value = 0.0;
  std::string method;
  std::uint64_t seed = 0;
  double value_bits = 0.0;
  double runtime_ms = 0.0;
};

// Throws InvalidInput naming the offending line for unknown keys or bad values.
SweepConfig parse_sweep_config(std::istream& in);

// Checks family/method compatibility and that `vary` names a numeric key.
void validate_sweep(const SweepConfig& config);

// One row per grid value x seed x method, in that nesting order. Only the
// estimator call is timed; data generation is excluded.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

// Header: variable,grid_value,method,seed,value_bits,runtime_ms
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace diffspec
