#pragma once

#include <cstddef>
#include <cstdint>

#include "diffspec/types.hpp"

// Seeded generators for the synthetic dataset families. Every generator is a
// pure function of its arguments and the seed.
namespace diffspec::synth {

// n x k matrix with orthonormal columns, Haar distributed (QR of a Gaussian
// matrix with the sign of R's diagonal folded into Q). Requires k <= n.
Eigen::MatrixXd random_orthonormal(std::size_t n, std::size_t k, std::uint64_t seed);

// k Gaussian blobs in R^d. Centers sit at separation * u_c for unit vectors
// u_c; for k <= d the u_c are orthonormal, so every pair of centers is
// separation * sqrt(2) apart. For k > d they are the best of 64 random draws
// by minimum pairwise distance. Class sizes differ by at most one.
PointCloud gen_blobs(std::size_t n, std::size_t k, std::size_t d, double separation,
                     double noise_std, std::uint64_t seed);

enum class Distribution { Uniform, Gaussian };

struct ManifoldOptions {
  Distribution dist = Distribution::Uniform;
  double noise_level = 0.0;  // fraction of the per-coordinate signal std
  bool rotate = true;
};

// n points drawn from U[-1,1]^d or N(0, I_d), placed in the first d of D
// coordinates and rotated into R^D by a random orthogonal map. Isotropic
// Gaussian noise with std noise_level * s is added afterwards, where s is the
// per-coordinate signal std in R^D: s^2 = v * d / D with v the latent
// per-coordinate variance (1/3 or 1). Total noise energy is therefore
// noise_level^2 times the total signal energy.
PointCloud gen_manifold(std::size_t n, std::size_t d, std::size_t ambient_dim,
                        const ManifoldOptions& options, std::uint64_t seed);

// k straight branches of unit length leaving the origin in random directions
// (orthonormal when k <= d), points uniform along each branch plus Gaussian
// noise. Labels are branch ids; branch sizes differ by at most one.
PointCloud gen_tree(std::size_t n, std::size_t branches, std::size_t d, double noise_std,
                    std::uint64_t seed);

// Replaces round(p * n) uniformly chosen positions with labels drawn
// uniformly from [0, num_classes).
Labels corrupt_labels(const Labels& labels, double p, int num_classes, std::uint64_t seed);

// (1 - w) S + w I, where S = Q diag(l) Q^T with Haar Q and l uniform on (0, 1]
// rescaled so that max(l) = 1.
Eigen::MatrixXd gen_psd_identity_mix(std::size_t n, double w, std::uint64_t seed);

}  // namespace diffspec::synth
