#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "diffspec/kernel.hpp"
#include "diffspec/types.hpp"

namespace diffspec {

// Value below which a mutual information estimate earns a warning. Negative
// estimates are reported unchanged.
inline constexpr double kNegativeMiFloor = -0.2;
inline constexpr std::size_t kDefaultRepeats = 5;

enum class SigmaPolicy {
  Global,     // the full cloud's median sigma is reused for every subset
  PerSubset,  // each conditional subset / subsample resolves its own median sigma
};

std::string sigma_policy_name(SigmaPolicy policy);

struct DsmiOptions {
  double t = 1.0;
  std::size_t repeats = kDefaultRepeats;
  std::uint64_t seed = 0;
  SigmaPolicy sigma_policy = SigmaPolicy::Global;
};

struct MIReport {
  std::string method;  // "DSMI" or "CSMI"
  double value = 0.0;  // bits, may be slightly negative
  std::vector<double> conditional_entropies;
  std::vector<double> unconditional_entropies;
  std::vector<std::size_t> class_sizes;
  std::size_t n = 0;
  std::size_t dim = 0;
  double t = 0.0;
  std::optional<double> sigma;  // shared sigma (explicit or global policy)
  bool sigma_explicit = false;
  std::vector<double> sigmas;  // sigma used by each conditional entropy
  std::vector<std::vector<std::size_t>> subsample_sizes;  // per class, per repeat
  SigmaPolicy sigma_policy = SigmaPolicy::Global;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  bool labels_derived = false;
  std::size_t bins_per_dim = 0;  // CSMI only
  std::vector<std::string> warnings;
};

// Diffusion spectral mutual information between a cloud and its labels:
//   sum_i p(y_i) * (S_sub,i - S_cond,i)
// where S_cond,i is the DSE of class i's points and S_sub,i the mean DSE over
// `repeats` uniform subsamples of the whole cloud of the same size. Requires
// labels, every class of size >= 2 and repeats >= 1. An explicit sigma in
// `config` overrides the sigma policy.
MIReport dsmi(const PointCloud& cloud, const KernelConfig& config, const DsmiOptions& options);

// DSMI between `representation` and cluster ids obtained by spectral
// clustering of `input` into num_clusters groups. Clusters left with fewer
// than two members are topped up with their nearest points.
MIReport dsmi_with_input(const PointCloud& representation, const PointCloud& input,
                         std::size_t num_clusters, const KernelConfig& config,
                         const DsmiOptions& options);

}  // namespace diffspec
