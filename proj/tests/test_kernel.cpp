#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "diffspec/error.hpp"
#include "diffspec/kernel.hpp"
#include "diffspec/spectrum.hpp"

using namespace diffspec;

namespace {

Matrix random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = normal(rng);
  }
  return pts;
}

double sorted_median(const Eigen::MatrixXd& sq) {
  std::vector<double> v;
  for (Eigen::Index i = 0; i < sq.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < sq.cols(); ++j) v.push_back(sq(i, j));
  }
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

TEST(MedianHeuristic, MatchesSortedMedian) {
  // n = 5 gives an even number of pairs, n = 6 an odd one.
  for (std::size_t n : {5, 6, 31, 40}) {
    const Eigen::MatrixXd sq = pairwise_sq_dists(random_points(n, 4, n));
    EXPECT_DOUBLE_EQ(median_heuristic_sigma(sq), sorted_median(sq)) << "n=" << n;
  }
}

TEST(MedianHeuristic, FallsBackToSmallestPositiveDistance) {
  Matrix pts(5, 1);
  pts << 0.0, 0.0, 0.0, 0.0, 2.0;
  EXPECT_DOUBLE_EQ(median_heuristic_sigma(pairwise_sq_dists(pts)), 4.0);
}

TEST(MedianHeuristic, RejectsDegenerateInput) {
  Matrix same(4, 2);
  same.setConstant(1.5);
  EXPECT_THROW(median_heuristic_sigma(pairwise_sq_dists(same)), DegenerateData);
  EXPECT_THROW(median_heuristic_sigma(Eigen::MatrixXd::Zero(1, 1)), InvalidInput);
}

TEST(ResolveSigma, ExplicitAndSinglePoint) {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  EXPECT_EQ(resolve_sigma(one, KernelConfig::median()), 1.0);
  EXPECT_EQ(resolve_sigma(one, KernelConfig::fixed(2.5)), 2.5);
  EXPECT_THROW(resolve_sigma(one, KernelConfig::fixed(0.0)), InvalidInput);
  EXPECT_THROW(resolve_sigma(one, KernelConfig::fixed(-1.0)), InvalidInput);
}

TEST(BuildKernel, TwoPointClosedForm) {
  // Squared distance equal to sigma: G = [[1, e^-1], [e^-1, 1]].
  Matrix pts(2, 1);
  pts << 0.0, std::sqrt(3.0);
  const KernelMatrices km = build_kernel(pts, KernelConfig::fixed(3.0));
  const double e = std::exp(-1.0);
  EXPECT_NEAR(km.gaussian(0, 1), e, 1e-15);
  const Spectrum s = eigenvalues_symmetric(km.symmetric);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues[1], (1.0 - e) / (1.0 + e), 1e-14);
}

TEST(BuildKernel, AnisotropicEntriesMatchDefinition) {
  const Matrix pts = random_points(25, 3, 1);
  const double sigma = 1.7;
  const KernelMatrices km = build_kernel(pts, KernelConfig::fixed(sigma));
  const Eigen::Index n = pts.rows();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = std::exp(-(pts.row(i) - pts.row(j)).squaredNorm() / sigma);
  }
  const Eigen::VectorXd rows = g.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = g(i, j) / std::pow(rows(i) * rows(j), 0.5);
      EXPECT_NEAR(km.gaussian(i, j), g(i, j), 1e-14);
      EXPECT_NEAR(km.anisotropic(i, j), k, 1e-14);
    }
  }
  const Eigen::VectorXd deg = km.anisotropic.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    EXPECT_NEAR(km.degree(i), deg(i), 1e-13);
    for (Eigen::Index j = 0; j < n; ++j) {
      EXPECT_NEAR(km.symmetric(i, j), km.anisotropic(i, j) / std::sqrt(deg(i) * deg(j)), 1e-14);
    }
  }
}

TEST(BuildKernel, MatricesAreExactlySymmetric) {
  const KernelMatrices km = build_kernel(random_points(40, 5, 2), {});
  EXPECT_TRUE(km.gaussian == km.gaussian.transpose());
  EXPECT_TRUE(km.anisotropic == km.anisotropic.transpose());
  EXPECT_TRUE(km.symmetric == km.symmetric.transpose());
}

TEST(BuildKernel, DiffusionOperatorIsRowStochastic) {
  const KernelMatrices km = build_kernel(random_points(30, 4, 3), {});
  const Eigen::MatrixXd p = km.diffusion_operator();
  for (Eigen::Index i = 0; i < p.rows(); ++i) EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-14);
  EXPECT_GE(p.minCoeff(), 0.0);
}

TEST(BuildKernel, SymmetricConjugateSharesSpectrumWithP) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const KernelMatrices km = build_kernel(random_points(20, 3, 100 + seed), {});
    Eigen::EigenSolver<Eigen::MatrixXd> general(km.diffusion_operator(), false);
    std::vector<double> want;
    for (Eigen::Index i = 0; i < general.eigenvalues().size(); ++i) {
      EXPECT_NEAR(general.eigenvalues()[i].imag(), 0.0, 1e-8);
      want.push_back(general.eigenvalues()[i].real());
    }
    std::sort(want.rbegin(), want.rend());
    const Spectrum got = eigenvalues_symmetric(km.symmetric);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got.eigenvalues[i], want[i], 1e-8);
    EXPECT_NEAR(got.eigenvalues.front(), 1.0, 1e-8);
  }
}

TEST(BuildKernel, PermutationPermutesMatrices) {
  const Matrix pts = random_points(30, 3, 4);
  std::vector<Eigen::Index> perm(30);
  for (Eigen::Index i = 0; i < 30; ++i) perm[static_cast<std::size_t>(i)] = (i * 7) % 30;
  Matrix shuffled(30, 3);
  for (Eigen::Index i = 0; i < 30; ++i) shuffled.row(i) = pts.row(perm[static_cast<std::size_t>(i)]);
  const KernelMatrices a = build_kernel(pts, {});
  const KernelMatrices b = build_kernel(shuffled, {});
  EXPECT_EQ(a.sigma, b.sigma);
  for (Eigen::Index i = 0; i < 30; ++i) {
    for (Eigen::Index j = 0; j < 30; ++j) {
      EXPECT_NEAR(b.symmetric(i, j), a.symmetric(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]),
                  1e-14);
    }
  }
}

TEST(BuildKernel, ScalingPointsAndSigmaTogetherIsInvariant) {
  const Matrix pts = random_points(30, 3, 5);
  const KernelMatrices a = build_kernel(pts, KernelConfig::fixed(2.0));
  const KernelMatrices b = build_kernel(pts * 4.0, KernelConfig::fixed(32.0));
  EXPECT_LE((a.gaussian - b.gaussian).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(BuildKernel, EnforcesPointCap) {
  KernelConfig cfg;
  cfg.max_points = 10;
  EXPECT_THROW(build_kernel(random_points(11, 2, 6), cfg), InvalidInput);
  EXPECT_NO_THROW(build_kernel(random_points(10, 2, 6), cfg));
}

TEST(BuildKernel, SubmatrixSelectsRowsAndColumns) {
  const Eigen::MatrixXd sq = pairwise_sq_dists(random_points(10, 2, 7));
  const std::vector<std::size_t> idx{1, 4, 9};
  const Eigen::MatrixXd sub = submatrix(sq, idx);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      EXPECT_EQ(sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                sq(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j])));
    }
  }
}

TEST(PairwiseDistances, OverflowIsNumericalFailure) {
  Matrix pts(2, 1);
  pts << 1e200, -1e200;
  EXPECT_THROW(pairwise_sq_dists(pts), NumericalFailure);
}
