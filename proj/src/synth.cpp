#include "diffspec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "diffspec/error.hpp"
#include "diffspec/rng.hpp"

namespace diffspec::synth {
namespace {

Eigen::MatrixXd gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = normal(rng);
  }
  return m;
}

Eigen::MatrixXd orthonormal_from(const Eigen::MatrixXd& g) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    if (r(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  return q;
}

// k unit directions in R^d, one per row.
Eigen::MatrixXd spread_directions(std::size_t k, std::size_t d, Rng& rng) {
  if (k <= d) return orthonormal_from(gaussian_matrix(d, k, rng)).transpose();
  Eigen::MatrixXd best;
  double best_gap = -1.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXd dirs = gaussian_matrix(k, d, rng);
    for (Eigen::Index i = 0; i < dirs.rows(); ++i) dirs.row(i).normalize();
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dirs.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < dirs.rows(); ++j) {
        gap = std::min(gap, (dirs.row(i) - dirs.row(j)).norm());
      }
    }
    if (gap > best_gap) {
      best_gap = gap;
      best = std::move(dirs);
    }
  }
  return best;
}

// Balanced class ids: the first n % k classes get one extra member.
Labels balanced_labels(std::size_t n, std::size_t k) {
  Labels labels;
  labels.reserve(n);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t size = base + (c < extra ? 1 : 0);
    labels.insert(labels.end(), size, static_cast<int>(c));
  }
  return labels;
}

}  // namespace

Eigen::MatrixXd random_orthonormal(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n || k == 0) throw InvalidInput("random_orthonormal: need 1 <= k <= n");
  Rng rng = derived_rng(seed, {0x0a7});
  return orthonormal_from(gaussian_matrix(n, k, rng));
}

PointCloud gen_blobs(std::size_t n, std::size_t k, std::size_t d, double separation,
                     double noise_std, std::uint64_t seed) {
  if (k < 1 || d < 1 || n < 2 * k) throw InvalidInput("gen_blobs: need k >= 1, d >= 1, n >= 2k");
  if (!(separation >= 0.0) || !(noise_std >= 0.0)) {
    throw InvalidInput("gen_blobs: separation and noise must be nonnegative");
  }
  Rng rng = derived_rng(seed, {0xb10b});
  const Eigen::MatrixXd centers = separation * spread_directions(k, d, rng);
  Labels labels = balanced_labels(n, k);
  std::normal_distribution<double> normal;
  Matrix pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const auto c = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      pts(i, j) = centers(c, j) + noise_std * normal(rng);
    }
  }
  return PointCloud(std::move(pts), std::move(labels));
}

PointCloud gen_manifold(std::size_t n, std::size_t d, std::size_t ambient_dim,
                        const ManifoldOptions& options, std::uint64_t seed) {
  if (n < 1 || d < 1 || d > ambient_dim) throw InvalidInput("gen_manifold: need 1 <= d <= D, n >= 1");
  if (!(options.noise_level >= 0.0 && options.noise_level < 1.0)) {
    throw InvalidInput("gen_manifold: noise_level must lie in [0, 1)");
  }
  Rng rng = derived_rng(seed, {0x3a41});
  Eigen::MatrixXd latent(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  double coord_std = 1.0;
  if (options.dist == Distribution::Uniform) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (Eigen::Index i = 0; i < latent.rows(); ++i) {
      for (Eigen::Index j = 0; j < latent.cols(); ++j) latent(i, j) = uni(rng);
    }
    coord_std = 1.0 / std::sqrt(3.0);
  } else {
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < latent.rows(); ++i) {
      for (Eigen::Index j = 0; j < latent.cols(); ++j) latent(i, j) = normal(rng);
    }
  }

  Matrix pts = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(ambient_dim));
  if (options.rotate) {
    // Only the first d columns of the rotation touch the zero-padded data.
    const Eigen::MatrixXd basis = orthonormal_from(gaussian_matrix(ambient_dim, d, rng));
    pts = latent * basis.transpose();
  } else {
    pts.leftCols(static_cast<Eigen::Index>(d)) = latent;
  }

  if (options.noise_level > 0.0) {
    // Per ambient coordinate the signal variance is coord_std^2 * d / D.
    const double signal_std =
        coord_std * std::sqrt(static_cast<double>(d) / static_cast<double>(ambient_dim));
    std::normal_distribution<double> normal(0.0, options.noise_level * signal_std);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) += normal(rng);
    }
  }
  return PointCloud(std::move(pts));
}

PointCloud gen_tree(std::size_t n, std::size_t branches, std::size_t d, double noise_std,
                    std::uint64_t seed) {
  if (branches < 2 || d < 3 || n < 10 * branches) {
    throw InvalidInput("gen_tree: need branches >= 2, d >= 3, n >= 10 * branches");
  }
  if (!(noise_std >= 0.0)) throw InvalidInput("gen_tree: noise must be nonnegative");
  Rng rng = derived_rng(seed, {0x7ee});
  const Eigen::MatrixXd dirs = spread_directions(branches, d, rng);
  Labels labels = balanced_labels(n, branches);
  std::uniform_real_distribution<double> along(0.0, 1.0);
  std::normal_distribution<double> normal;
  Matrix pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const auto b = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
    const double s = along(rng);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      pts(i, j) = s * dirs(b, j) + (noise_std > 0.0 ? noise_std * normal(rng) : 0.0);
    }
  }
  return PointCloud(std::move(pts), std::move(labels));
}

Labels corrupt_labels(const Labels& labels, double p, int num_classes, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("corrupt_labels: p must lie in [0, 1]");
  if (num_classes < 1) throw InvalidInput("corrupt_labels: num_classes must be positive");
  Labels out = labels;
  const auto count = static_cast<std::size_t>(std::llround(p * static_cast<double>(labels.size())));
  if (count == 0) return out;
  Rng rng = derived_rng(seed, {0xc0ff});
  std::uniform_int_distribution<int> draw(0, num_classes - 1);
  for (std::size_t pos : sample_without_replacement(rng, labels.size(), count)) {
    out[pos] = draw(rng);
  }
  return out;
}

Eigen::MatrixXd gen_psd_identity_mix(std::size_t n, double w, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("gen_psd_identity_mix: n must be positive");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("gen_psd_identity_mix: w must lie in [0, 1]");
  Rng rng = derived_rng(seed, {0x95d});
  const Eigen::MatrixXd q = orthonormal_from(gaussian_matrix(n, n, rng));
  Vector lambda(static_cast<Eigen::Index>(n));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda[i] = 1.0 - uni(rng);  // (0, 1]
  lambda /= lambda.maxCoeff();
  const Eigen::MatrixXd s = q * lambda.asDiagonal() * q.transpose();
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  return (1.0 - w) * sym + w * Eigen::MatrixXd::Identity(sym.rows(), sym.cols());
}

}  // namespace diffspec::synth
