#include "diffspec/ablation.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "diffspec/error.hpp"

namespace diffspec {

Eigen::MatrixXd knn_adjacency(const Eigen::MatrixXd& sq_dists, std::size_t k) {
  const auto n = static_cast<std::size_t>(sq_dists.rows());
  if (k < 1 || k >= n) throw InvalidInput("knn_k must satisfy 1 <= k < n");
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(sq_dists.rows(), sq_dists.cols());
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    const auto ii = static_cast<Eigen::Index>(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return sq_dists(ii, static_cast<Eigen::Index>(a)) < sq_dists(ii, static_cast<Eigen::Index>(b));
    });
    std::size_t taken = 0;
    for (std::size_t j : order) {
      if (j == i) continue;
      const auto jj = static_cast<Eigen::Index>(j);
      adj(ii, jj) = 1.0;
      adj(jj, ii) = 1.0;
      if (++taken == k) break;
    }
  }
  return adj;
}

double diffusion_entry_entropy(const KernelMatrices& km) {
  const Eigen::MatrixXd p = km.diffusion_operator();
  return shannon_bits(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

double unclamped_spectral_entropy(const Eigen::MatrixXd& symmetric, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver failed");
  const Vector& vals = solver.eigenvalues();
  return spectral_entropy_bits(std::span<const double>(vals.data(), static_cast<std::size_t>(vals.size())), t);
}

std::map<std::string, EntropyReport> ablation_entropies(const PointCloud& cloud,
                                                        std::size_t knn_k,
                                                        const KernelConfig& config, double t) {
  cloud.validate();
  if (knn_k < 1 || knn_k >= cloud.size()) throw InvalidInput("knn_k must satisfy 1 <= k < n");
  const Eigen::MatrixXd sq = pairwise_sq_dists(cloud.points);
  const double sigma = resolve_sigma(sq, config);
  const KernelMatrices km = build_kernel_from_sq_dists(sq, sigma, config.alpha);

  auto make = [&](EntropyMethod m, double value) {
    EntropyReport r;
    r.method = m;
    r.value = value;
    r.t = t;
    r.sigma = sigma;
    r.n = cloud.size();
    r.dim = cloud.dim();
    return r;
  };

  std::map<std::string, EntropyReport> out;
  EntropyReport d = dse(eigenvalues_symmetric(km.symmetric), t);
  d.sigma = sigma;
  d.dim = cloud.dim();
  out.emplace(method_name(EntropyMethod::DSE), d);
  EntropyReport dmee = make(EntropyMethod::DMEE, diffusion_entry_entropy(km));
  dmee.t.reset();
  out.emplace(method_name(EntropyMethod::DMEE), dmee);
  EntropyReport knn = make(EntropyMethod::KnnSpectral,
                           unclamped_spectral_entropy(knn_adjacency(sq, knn_k), t));
  knn.sigma.reset();
  out.emplace(method_name(EntropyMethod::KnnSpectral), knn);
  out.emplace(method_name(EntropyMethod::GaussianSpectral),
              make(EntropyMethod::GaussianSpectral, unclamped_spectral_entropy(km.gaussian, t)));
  return out;
}

}  // namespace diffspec
