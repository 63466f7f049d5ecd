#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "diffspec/kernel.hpp"
#include "diffspec/spectrum.hpp"
#include "diffspec/types.hpp"

namespace diffspec {

inline constexpr std::size_t kDefaultKnn = 10;

// Symmetrized binary k-nearest-neighbour adjacency (self excluded, ties broken
// by lower index): A_ij = 1 when j is among i's k nearest or i among j's.
Eigen::MatrixXd knn_adjacency(const Eigen::MatrixXd& sq_dists, std::size_t k);

// Shannon entropy in bits over all n^2 entries of P, normalized to sum to one.
double diffusion_entry_entropy(const KernelMatrices& km);

// Entropy of |lambda|^t over the eigenvalues of an arbitrary symmetric matrix.
// No clamping: adjacency spectra may be negative.
double unclamped_spectral_entropy(const Eigen::MatrixXd& symmetric, double t);

// Alternative entropies next to DSE, keyed by method_name(): "DSE", "DMEE",
// "KNN" (binary k-NN adjacency spectrum) and "Gaussian" (spectrum of G).
// Throws InvalidInput unless 1 <= knn_k < n.
std::map<std::string, EntropyReport> ablation_entropies(const PointCloud& cloud,
                                                        std::size_t knn_k,
                                                        const KernelConfig& config, double t);

}  // namespace diffspec
