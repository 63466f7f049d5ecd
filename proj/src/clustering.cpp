#include "diffspec/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "diffspec/error.hpp"
#include "diffspec/parallel.hpp"
#include "diffspec/rng.hpp"
#include "diffspec/simd/kernels.hpp"

namespace diffspec {
namespace {

struct RestartResult {
  Labels ids;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

Matrix plus_plus_centers(const Matrix& x, std::size_t k, Rng& rng) {
  const auto& kern = simd::active_kernels();
  const auto n = static_cast<std::size_t>(x.rows());
  const auto dim = static_cast<std::size_t>(x.cols());
  Matrix centers(static_cast<Eigen::Index>(k), x.cols());
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  centers.row(0) = x.row(static_cast<Eigen::Index>(first(rng)));
  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i) {
    closest[i] = kern.squared_distance(x.data() + i * dim, centers.data(), dim);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : closest) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += closest[i];
        if (acc > target && closest[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    centers.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
    const double* cp = centers.data() + c * dim;
    for (std::size_t i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i], kern.squared_distance(x.data() + i * dim, cp, dim));
    }
  }
  return centers;
}

RestartResult lloyd(const Matrix& x, std::size_t k, Rng& rng, const KMeansOptions& options) {
  const auto& kern = simd::active_kernels();
  const auto n = static_cast<std::size_t>(x.rows());
  const auto dim = static_cast<std::size_t>(x.cols());
  Matrix centers = plus_plus_centers(x, k, rng);
  RestartResult res;
  res.ids.assign(n, 0);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double d = kern.squared_distance(x.data() + i * dim, centers.data() + c * dim, dim);
        if (d < best) {
          best = d;
          arg = static_cast<int>(c);
        }
      }
      res.ids[i] = arg;
      inertia += best;
    }
    res.trace.push_back(inertia);
    res.inertia = inertia;

    Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), x.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(res.ids[i]) += x.row(static_cast<Eigen::Index>(i));
      ++counts[static_cast<std::size_t>(res.ids[i])];
    }
    for (std::size_t c = 0; c < k; ++c) {
      // An emptied center keeps its position.
      if (counts[c] > 0) {
        centers.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
      }
    }
    const bool settled = previous - inertia <= options.relative_tolerance * std::max(previous, 1e-300);
    if (inertia == 0.0 || (std::isfinite(previous) && settled)) break;
    previous = inertia;
  }
  return res;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                         const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1 || k > n) throw InvalidInput("kmeans: need 1 <= k <= n");
  if (options.restarts < 1) throw InvalidInput("kmeans: restarts must be positive");
  std::vector<RestartResult> runs(options.restarts);
  parallel_for(0, options.restarts, [&](std::size_t r) {
    Rng rng = derived_rng(seed, {0x6b6d, r});
    runs[r] = lloyd(points, k, rng, options);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  ClusterAssignment out;
  out.k = k;
  out.ids = std::move(runs[best].ids);
  out.inertia = runs[best].inertia;
  out.inertia_trace = std::move(runs[best].trace);
  out.iterations = out.inertia_trace.size();
  return out;
}

ClusterAssignment spectral_cluster(const PointCloud& cloud, std::size_t k, std::uint64_t seed,
                                   const KernelConfig& config, const KMeansOptions& options) {
  cloud.validate();
  if (k < 2 || k > cloud.size()) throw InvalidInput("spectral_cluster: need 2 <= k <= n");
  const KernelMatrices km = build_kernel(cloud.points, config);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(km.symmetric);
  if (solver.info() != Eigen::Success) throw NumericalFailure("spectral_cluster: eigensolver failed");
  const auto kk = static_cast<Eigen::Index>(k);
  // Eigen sorts ascending; the leading eigenvectors are the last k columns.
  Matrix embed = solver.eigenvectors().rightCols(kk).rowwise().reverse();
  for (Eigen::Index i = 0; i < embed.rows(); ++i) {
    const double norm = embed.row(i).norm();
    if (norm > 0.0) embed.row(i) /= norm;
  }
  return kmeans(embed, k, seed, options);
}

double adjusted_rand_index(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw InvalidInput("adjusted_rand_index: size mismatch");
  if (a.size() < 2) return 1.0;
  const auto n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
  double index = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [key, m] : joint) index += pairs(m);
  for (const auto& [key, m] : ra) sa += pairs(m);
  for (const auto& [key, m] : rb) sb += pairs(m);
  const double expected = sa * sb / pairs(n);
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace diffspec
