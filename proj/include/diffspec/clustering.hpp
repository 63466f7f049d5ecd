#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "diffspec/kernel.hpp"
#include "diffspec/types.hpp"

namespace diffspec {

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
  double relative_tolerance = 1e-6;
};

struct ClusterAssignment {
  Labels ids;  // in [0, k)
  std::size_t k = 0;
  double inertia = 0.0;        // sum of squared distances to assigned centers
  std::size_t iterations = 0;  // Lloyd iterations of the winning restart
  std::vector<double> inertia_trace;  // winning restart, one entry per iteration
};

// Lloyd's k-means with k-means++ seeding. Restarts draw from independent
// seeded streams; the lowest inertia wins, ties to the lower restart index.
// Assignment ties go to the lowest center index.
ClusterAssignment kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                         const KMeansOptions& options = {});

// Normalized-affinity spectral clustering: top-k eigenvectors of the
// symmetric diffusion conjugate A, rows scaled to unit length (zero rows kept),
// then k-means. Requires 2 <= k <= n.
ClusterAssignment spectral_cluster(const PointCloud& cloud, std::size_t k, std::uint64_t seed,
                                   const KernelConfig& config = KernelConfig::median(),
                                   const KMeansOptions& options = {});

// Adjusted Rand index between two labelings of the same points. Fewer than
// two points, or two single-cluster labelings, count as a perfect match (1).
double adjusted_rand_index(const Labels& a, const Labels& b);

}  // namespace diffspec
