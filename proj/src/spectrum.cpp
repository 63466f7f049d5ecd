#include "diffspec/spectrum.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "diffspec/error.hpp"

namespace diffspec {

std::string method_name(EntropyMethod method) {
  switch (method) {
    case EntropyMethod::DSE:
      return "DSE";
    case EntropyMethod::CSE:
      return "CSE";
    case EntropyMethod::DMEE:
      return "DMEE";
    case EntropyMethod::KnnSpectral:
      return "KNN";
    case EntropyMethod::GaussianSpectral:
      return "Gaussian";
  }
  return "unknown";
}

Spectrum eigenvalues_symmetric(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw InvalidInput("eigenvalues_symmetric: matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidInput("eigenvalues_symmetric: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge");
  }
  Spectrum out;
  const Vector& vals = solver.eigenvalues();
  out.eigenvalues.assign(vals.data(), vals.data() + vals.size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
  for (double& v : out.eigenvalues) {
    if (v < -kEigenClamp || v > 1.0 + kEigenClamp) {
      std::ostringstream msg;
      msg << "eigenvalue " << v << " outside [" << -kEigenClamp << ", 1 + " << kEigenClamp
          << "]; kernel is not a PSD diffusion operator";
      throw NumericalFailure(msg.str());
    }
    if (v < 0.0) {
      v = 0.0;
      ++out.clamped_count;
    }
  }
  return out;
}

double shannon_bits(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += std::abs(w);
  if (!(total > 0.0)) throw NumericalFailure("entropy of an all-zero distribution");
  double h = 0.0;
  for (double w : weights) {
    const double p = std::abs(w) / total;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

std::vector<double> powered_magnitudes(std::span<const double> eigenvalues, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("diffusion time t must be positive");
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  const bool log_space = t > kLogSpacePowerThreshold;
  for (double lam : eigenvalues) {
    const double mag = std::abs(lam);
    double p = 0.0;
    if (mag > 0.0) p = log_space ? std::exp(t * std::log(mag)) : std::pow(mag, t);
    out.push_back(p < kPowerFloor ? 0.0 : p);
  }
  return out;
}

double spectral_entropy_bits(std::span<const double> eigenvalues, double t) {
  return shannon_bits(powered_magnitudes(eigenvalues, t));
}

EntropyReport dse(const Spectrum& spectrum, double t) {
  if (spectrum.eigenvalues.empty()) throw InvalidInput("dse: empty spectrum");
  EntropyReport r;
  r.method = EntropyMethod::DSE;
  r.value = spectral_entropy_bits(spectrum.eigenvalues, t);
  r.t = t;
  r.n = spectrum.size();
  r.clamped_count = spectrum.clamped_count;
  const std::size_t top = std::min<std::size_t>(10, spectrum.size());
  r.top_eigenvalues.assign(spectrum.eigenvalues.begin(),
                           spectrum.eigenvalues.begin() + static_cast<std::ptrdiff_t>(top));
  return r;
}

EntropyReport dse_of_sq_dists(const Eigen::MatrixXd& sq_dists, const KernelConfig& config,
                              double t) {
  const double sigma = resolve_sigma(sq_dists, config);
  const KernelMatrices km = build_kernel_from_sq_dists(sq_dists, sigma, config.alpha);
  EntropyReport r = dse(eigenvalues_symmetric(km.symmetric), t);
  r.sigma = sigma;
  r.sigma_explicit = config.sigma.has_value();
  return r;
}

EntropyReport dse_of_cloud(const PointCloud& cloud, const KernelConfig& config, double t) {
  cloud.validate();
  if (!(t > 0.0)) throw InvalidInput("diffusion time t must be positive");
  EntropyReport r = dse_of_sq_dists(pairwise_sq_dists(cloud.points), config, t);
  r.dim = cloud.dim();
  return r;
}

double gaussian_kernel_moment(std::size_t d, double sigma) {
  if (d < 1) throw InvalidInput("dimension must be at least 1");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  return std::pow(1.0 + 4.0 / sigma, -0.5 * static_cast<double>(d));
}

double dse_upper_bound(std::size_t n, std::size_t d, double sigma) {
  if (n < 2) throw InvalidInput("dse_upper_bound: n must be at least 2");
  const double beta = gaussian_kernel_moment(d, sigma);
  assert(beta < 1.0);
  const double nn = static_cast<double>(n);
  const double weight = 1.0 / nn + (nn - 1.0) / nn * beta;
  return std::log2(nn / (1.0 - beta)) - weight * std::log2(1.0 + beta * nn / (1.0 - beta));
}

double telescoping_entropy(std::span<const double> descending, std::size_t m) {
  const std::size_t n = descending.size();
  if (m < 2 || m > n) throw InvalidInput("telescoping_entropy: m must lie in [2, n]");
  std::vector<double> weights(descending.begin(), descending.begin() + static_cast<std::ptrdiff_t>(m));
  weights.resize(n, descending[m - 1]);
  return shannon_bits(weights);
}

}  // namespace diffspec
