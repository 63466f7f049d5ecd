#pragma once

#include <cstddef>
#include <optional>

#include "diffspec/types.hpp"

namespace diffspec {

inline constexpr double kStandardAlpha = 0.5;
inline constexpr std::size_t kDefaultMaxPoints = 10000;

// Bandwidth and anisotropy of the Gaussian kernel exp(-|x - y|^2 / sigma).
// An empty sigma selects the median heuristic over squared distances.
struct KernelConfig {
  std::optional<double> sigma;
  double alpha = kStandardAlpha;
  // Dense O(n^2) memory and O(n^3) eigensolves: larger clouds are rejected.
  std::size_t max_points = kDefaultMaxPoints;

  static KernelConfig median() { return {}; }
  static KernelConfig fixed(double s) { return {s, kStandardAlpha, kDefaultMaxPoints}; }

  // alpha other than 1/2 is only reachable through the library API.
  bool is_standard() const { return alpha == kStandardAlpha; }
};

// All matrices are n x n and symmetric by construction.
struct KernelMatrices {
  Eigen::MatrixXd gaussian;     // G_ij = exp(-d_ij / sigma), G_ii = 1
  Eigen::MatrixXd anisotropic;  // K_ij = G_ij / (g_i g_j)^alpha, g = row sums of G
  Vector degree;                // row sums of K
  Eigen::MatrixXd symmetric;    // A = D^-1/2 K D^-1/2, similar to P = D^-1 K
  double sigma = 0.0;
  double alpha = kStandardAlpha;

  std::size_t size() const { return static_cast<std::size_t>(gaussian.rows()); }

  // Row-stochastic diffusion operator P = D^-1 K.
  Eigen::MatrixXd diffusion_operator() const;
};

// Squared Euclidean distances between all rows. Exactly symmetric, zero on
// the diagonal, clamped at zero from below. Throws NumericalFailure if a
// distance overflows.
Eigen::MatrixXd pairwise_sq_dists(const Matrix& points);

// Median of the off-diagonal squared distances, falling back to the smallest
// positive one when the median is zero. Throws InvalidInput for n < 2 and
// DegenerateData when every point coincides.
double median_heuristic_sigma(const Eigen::MatrixXd& sq_dists);

// Throws InvalidInput when n exceeds config.max_points.
void check_point_cap(std::size_t n, const KernelConfig& config);

// sigma from the config, or the median heuristic. A single point has no pairs,
// so an unset sigma resolves to 1 there (it has no effect on a 1x1 kernel).
double resolve_sigma(const Eigen::MatrixXd& sq_dists, const KernelConfig& config);

KernelMatrices build_kernel(const Matrix& points, const KernelConfig& config);

// Same construction starting from precomputed squared distances, with sigma
// already resolved.
KernelMatrices build_kernel_from_sq_dists(const Eigen::MatrixXd& sq_dists, double sigma,
                                          double alpha = kStandardAlpha);

// Extracts the rows/columns listed in idx.
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& full, const std::vector<std::size_t>& idx);

}  // namespace diffspec
