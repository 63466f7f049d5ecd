#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diffspec/kernel.hpp"
#include "diffspec/types.hpp"

namespace diffspec {

// Eigenvalues below -kEigenClamp are treated as a construction bug; those in
// [-kEigenClamp, 0) are roundoff on a PSD operator and clamp to zero.
inline constexpr double kEigenClamp = 1e-8;
// Above this diffusion time eigenvalues are powered in log space.
inline constexpr double kLogSpacePowerThreshold = 50.0;
// Powered eigenvalues below this count as exactly zero.
inline constexpr double kPowerFloor = 1e-300;

struct Spectrum {
  std::vector<double> eigenvalues;  // descending, in [0, 1 + kEigenClamp]
  std::size_t clamped_count = 0;

  std::size_t size() const { return eigenvalues.size(); }
};

enum class EntropyMethod { DSE, CSE, DMEE, KnnSpectral, GaussianSpectral };

std::string method_name(EntropyMethod method);

struct EntropyReport {
  EntropyMethod method = EntropyMethod::DSE;
  double value = 0.0;  // bits
  std::optional<double> t;
  std::optional<double> sigma;
  bool sigma_explicit = false;  // false: median heuristic
  std::size_t n = 0;
  std::size_t dim = 0;
  std::optional<std::size_t> bins_per_dim;
  std::vector<double> top_eigenvalues;  // at most ten, descending
  std::size_t clamped_count = 0;
};

// All eigenvalues of a symmetric matrix, values only, sorted descending.
// Throws InvalidInput when the matrix is not square or not symmetric within
// 1e-10 and NumericalFailure when an eigenvalue falls outside
// [-kEigenClamp, 1 + kEigenClamp].
Spectrum eigenvalues_symmetric(const Eigen::MatrixXd& matrix);

// Shannon entropy in bits of the distribution |x_i| / sum |x|, with 0 log 0 = 0.
double shannon_bits(std::span<const double> weights);

// Powers each |lambda| by t (log space above kLogSpacePowerThreshold) and
// flushes values under kPowerFloor to zero.
std::vector<double> powered_magnitudes(std::span<const double> eigenvalues, double t);

// Entropy of the normalized powered spectrum, any sign allowed. Shared by DSE
// and the ablation variants. Throws NumericalFailure when all powers vanish.
double spectral_entropy_bits(std::span<const double> eigenvalues, double t);

// Diffusion spectral entropy of an operator spectrum at diffusion time t > 0.
EntropyReport dse(const Spectrum& spectrum, double t);

// build_kernel -> eigenvalues_symmetric -> dse. The report carries the
// resolved sigma.
EntropyReport dse_of_cloud(const PointCloud& cloud, const KernelConfig& config, double t);

// Same from precomputed squared distances.
EntropyReport dse_of_sq_dists(const Eigen::MatrixXd& sq_dists, const KernelConfig& config,
                              double t);

// Approximate upper bound on the expected DSE at t = 1 for n i.i.d. standard
// Gaussian points in R^d with bandwidth sigma:
//   log2(n / (1 - b)) - (1/n + (n-1)/n * b) * log2(1 + b n / (1 - b)),
//   b = (1 + 4 / sigma)^(-d/2).
double dse_upper_bound(std::size_t n, std::size_t d, double sigma);

// Entropy in bits of the n weights {l_1, ..., l_{m-1}, l_m repeated n-m+1
// times}, where l are the n eigenvalues sorted in descending order and
// 2 <= m <= n. Nonincreasing in m; at m = n it is the t = 1 entropy.
double telescoping_entropy(std::span<const double> descending, std::size_t m);

// The kernel-moment constant b above.
double gaussian_kernel_moment(std::size_t d, double sigma);

}  // namespace diffspec
