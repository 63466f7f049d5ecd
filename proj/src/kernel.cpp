#include "diffspec/kernel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "diffspec/error.hpp"
#include "diffspec/parallel.hpp"
#include "diffspec/simd/kernels.hpp"

namespace diffspec {

Eigen::MatrixXd pairwise_sq_dists(const Matrix& points) {
  if (!points.allFinite()) throw InvalidInput("pairwise_sq_dists: non-finite input");
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = static_cast<std::size_t>(points.cols());
  const auto& kern = simd::active_kernels();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(points.rows(), points.rows());
  // Column i of the (column-major) result holds row i's upper part; the lower
  // triangle is mirrored afterwards so both halves carry the same bits.
  parallel_for(0, n, [&](std::size_t i) {
    const double* xi = points.data() + i * dim;
    double* col = out.data() + i * n;
    for (std::size_t j = 0; j < i; ++j) {
      col[j] = std::max(0.0, kern.squared_distance(points.data() + j * dim, xi, dim));
    }
  });
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < out.rows(); ++j) out(j, i) = out(i, j);
  }
  if (!out.allFinite()) throw NumericalFailure("squared distances overflow double precision");
  return out;
}

double median_heuristic_sigma(const Eigen::MatrixXd& sq_dists) {
  const Eigen::Index n = sq_dists.rows();
  if (n < 2) throw InvalidInput("median heuristic needs at least two points");
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) vals.push_back(sq_dists(i, j));
  }
  const std::size_t m = vals.size();
  double median;
  if (m % 2 == 1) {
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(m / 2), vals.end());
    median = vals[m / 2];
  } else {
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(m / 2), vals.end());
    const double upper = vals[m / 2];
    const double lower =
        *std::max_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(m / 2));
    median = 0.5 * (lower + upper);
  }
  if (median > 0.0) return median;
  double smallest = std::numeric_limits<double>::infinity();
  for (double v : vals) {
    if (v > 0.0) smallest = std::min(smallest, v);
  }
  if (!std::isfinite(smallest)) throw DegenerateData("all points are identical");
  return smallest;
}

void check_point_cap(std::size_t n, const KernelConfig& config) {
  if (n > config.max_points) {
    throw InvalidInput("point count " + std::to_string(n) + " exceeds the cap of " +
                       std::to_string(config.max_points));
  }
}

double resolve_sigma(const Eigen::MatrixXd& sq_dists, const KernelConfig& config) {
  if (config.sigma) {
    if (!(*config.sigma > 0.0) || !std::isfinite(*config.sigma)) {
      throw InvalidInput("sigma must be positive and finite");
    }
    return *config.sigma;
  }
  if (sq_dists.rows() < 2) return 1.0;
  return median_heuristic_sigma(sq_dists);
}

KernelMatrices build_kernel_from_sq_dists(const Eigen::MatrixXd& sq_dists, double sigma,
                                          double alpha) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  if (sq_dists.rows() != sq_dists.cols() || sq_dists.rows() < 1) {
    throw InvalidInput("distance matrix must be square and non-empty");
  }
  const auto n = static_cast<std::size_t>(sq_dists.rows());
  const auto& kern = simd::active_kernels();

  KernelMatrices km;
  km.sigma = sigma;
  km.alpha = alpha;
  km.gaussian.resize(sq_dists.rows(), sq_dists.cols());
  const double inv_sigma = 1.0 / sigma;
  // Elementwise, so symmetry of the distances carries over bit for bit.
  parallel_for(0, n, [&](std::size_t c) {
    const double* src = sq_dists.data() + c * n;
    double* dst = km.gaussian.data() + c * n;
    for (std::size_t r = 0; r < n; ++r) dst[r] = std::exp(-src[r] * inv_sigma);
  });

  // Columns and rows coincide for a symmetric matrix; summing columns keeps
  // the memory access contiguous.
  Vector gsum(sq_dists.rows());
  for (std::size_t c = 0; c < n; ++c) {
    gsum[static_cast<Eigen::Index>(c)] = kern.sum(km.gaussian.data() + c * n, n);
  }
  Vector gscale(sq_dists.rows());
  for (Eigen::Index i = 0; i < gscale.size(); ++i) gscale[i] = std::pow(gsum[i], -alpha);

  km.anisotropic = km.gaussian;
  parallel_for(0, n, [&](std::size_t c) {
    kern.scale_outer(km.anisotropic.data() + c * n, gscale.data(),
                     gscale[static_cast<Eigen::Index>(c)], n);
  });

  km.degree.resize(sq_dists.rows());
  for (std::size_t c = 0; c < n; ++c) {
    km.degree[static_cast<Eigen::Index>(c)] = kern.sum(km.anisotropic.data() + c * n, n);
  }
  Vector dscale(sq_dists.rows());
  for (Eigen::Index i = 0; i < dscale.size(); ++i) {
    // K_ii > 0 for every i, so the degree is strictly positive.
    assert(km.degree[i] > 0.0);
    dscale[i] = 1.0 / std::sqrt(km.degree[i]);
  }

  km.symmetric = km.anisotropic;
  parallel_for(0, n, [&](std::size_t c) {
    kern.scale_outer(km.symmetric.data() + c * n, dscale.data(),
                     dscale[static_cast<Eigen::Index>(c)], n);
  });
  return km;
}

KernelMatrices build_kernel(const Matrix& points, const KernelConfig& config) {
  if (points.rows() < 1) throw InvalidInput("build_kernel: empty point cloud");
  check_point_cap(static_cast<std::size_t>(points.rows()), config);
  const Eigen::MatrixXd sq = pairwise_sq_dists(points);
  return build_kernel_from_sq_dists(sq, resolve_sigma(sq, config), config.alpha);
}

Eigen::MatrixXd KernelMatrices::diffusion_operator() const {
  Eigen::MatrixXd p = anisotropic;
  for (Eigen::Index i = 0; i < p.rows(); ++i) p.row(i) /= degree[i];
  return p;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& full, const std::vector<std::size_t>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto sc = static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < m; ++r) {
      out(r, c) = full(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]), sc);
    }
  }
  return out;
}

}  // namespace diffspec
