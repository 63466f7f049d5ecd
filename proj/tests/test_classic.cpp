#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "diffspec/classic.hpp"
#include "diffspec/error.hpp"
#include "diffspec/synth.hpp"

using namespace diffspec;

namespace {

Matrix gaussian_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  }
  return m;
}

// Bucket tuples by explicit edge comparison, counted in an ordered map.
std::map<std::vector<int>, int> oracle_buckets(const Matrix& pts, const std::vector<std::size_t>& rows,
                                               std::size_t bins) {
  std::map<std::vector<int>, int> out;
  for (std::size_t r : rows) {
    std::vector<int> key;
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const double lo = pts.col(j).minCoeff(), hi = pts.col(j).maxCoeff();
      const double width = (hi - lo) / static_cast<double>(bins);
      int b = 0;
      while (b + 1 < static_cast<int>(bins) && pts(static_cast<Eigen::Index>(r), j) >= lo + width * (b + 1)) ++b;
      key.push_back(b);
    }
    ++out[key];
  }
  return out;
}

double oracle_entropy(const std::map<std::vector<int>, int>& buckets, double total) {
  double h = 0.0;
  for (const auto& [key, count] : buckets) h -= count / total * std::log2(count / total);
  return h;
}

std::vector<std::size_t> iota_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

}  // namespace

TEST(BinOf, EdgesAndDegenerateRange) {
  EXPECT_EQ(bin_of(0.0, 0.0, 1.0, 2), 0u);
  EXPECT_EQ(bin_of(0.49, 0.0, 1.0, 2), 0u);
  EXPECT_EQ(bin_of(0.5, 0.0, 1.0, 2), 1u);
  EXPECT_EQ(bin_of(1.0, 0.0, 1.0, 2), 1u);  // top edge closed
  EXPECT_EQ(bin_of(0.05, 0.0, 1.0, 10), 0u);
  EXPECT_EQ(bin_of(0.15, 0.0, 1.0, 10), 1u);
  EXPECT_EQ(bin_of(3.0, 3.0, 3.0, 4), 0u);
}

TEST(Cse, OneDimensionalHistogramOracle) {
  const Matrix pts = gaussian_points(500, 1, 1);
  for (std::size_t bins : {2, 3, 7, 16}) {
    const double want = oracle_entropy(oracle_buckets(pts, iota_rows(500), bins), 500.0);
    EXPECT_NEAR(cse(PointCloud(pts), {bins}).value, want, 1e-12) << bins;
  }
}

TEST(Cse, MultiDimensionalBucketOracle) {
  const Matrix pts = gaussian_points(300, 5, 2);
  for (std::size_t bins : {2, 3}) {
    const double want = oracle_entropy(oracle_buckets(pts, iota_rows(300), bins), 300.0);
    EXPECT_NEAR(cse(PointCloud(pts), {bins}).value, want, 1e-12);
  }
}

TEST(Cse, IdenticalRowsGiveZero) {
  EXPECT_EQ(cse(PointCloud(Matrix::Constant(20, 4, 2.5))).value, 0.0);
}

TEST(Cse, BoundedByLogMinNAndBuckets) {
  for (std::size_t d : {1, 2, 4, 12}) {
    for (std::size_t bins : {2, 5}) {
      const double v = cse(PointCloud(gaussian_points(200, d, d * 10 + bins)), {bins}).value;
      const double cap = std::min(std::log2(200.0), static_cast<double>(d) * std::log2(static_cast<double>(bins)));
      EXPECT_LE(v, cap + 1e-12);
    }
  }
}

TEST(Cse, SaturatesForDistinctHighDimensionalRows) {
  EXPECT_NEAR(cse(PointCloud(gaussian_points(10000, 64, 3)), {2}).value, std::log2(10000.0), 1e-6);
}

TEST(Cse, InvariantToPositiveAffineMaps) {
  const Matrix pts = gaussian_points(300, 4, 4);
  Matrix mapped = pts;
  const double scale[] = {0.01, 3.0, 250.0, 1.0};
  const double shift[] = {5.0, -2.0, 0.0, 1e3};
  for (Eigen::Index j = 0; j < 4; ++j) mapped.col(j) = (pts.col(j).array() * scale[j] + shift[j]).matrix();
  for (std::size_t bins : {2, 4}) {
    EXPECT_NEAR(cse(PointCloud(pts), {bins}).value, cse(PointCloud(mapped), {bins}).value, 1e-12);
  }
}

TEST(Cse, RejectsSingleBin) {
  EXPECT_THROW(cse(PointCloud(gaussian_points(10, 2, 5)), {1}), InvalidInput);
}

TEST(Csmi, MatchesOracleWithGlobalRanges) {
  const PointCloud c = synth::gen_blobs(240, 3, 3, 2.0, 1.0, 6);
  const auto members = class_members(*c.labels, 3);
  for (std::size_t bins : {2, 3}) {
    const double joint = oracle_entropy(oracle_buckets(c.points, iota_rows(240), bins), 240.0);
    double conditional = 0.0;
    for (const auto& rows : members) {
      // Ranges stay those of the whole cloud, which oracle_buckets computes
      // from every row of `c.points`.
      conditional += static_cast<double>(rows.size()) / 240.0 *
                     oracle_entropy(oracle_buckets(c.points, rows, bins), static_cast<double>(rows.size()));
    }
    const MIReport r = csmi(c, {bins});
    EXPECT_NEAR(r.value, joint - conditional, 1e-12);
    EXPECT_EQ(r.method, "CSMI");
    EXPECT_EQ(r.class_sizes, (std::vector<std::size_t>{80, 80, 80}));
    EXPECT_EQ(r.bins_per_dim, bins);
  }
}

TEST(Csmi, LabelsDeterminedByBucketGiveFullEntropy) {
  Matrix pts(4, 1);
  pts << 0.0, 0.1, 0.9, 1.0;
  const PointCloud c(pts, Labels{0, 0, 1, 1});
  EXPECT_NEAR(csmi(c).value, 1.0, 1e-15);
}

TEST(Csmi, Errors) {
  const PointCloud unlabeled(gaussian_points(10, 2, 7));
  EXPECT_THROW(csmi(unlabeled), InvalidInput);
  const PointCloud gap(gaussian_points(4, 2, 7), Labels{0, 0, 2, 2});
  EXPECT_THROW(csmi(gap), InvalidInput);
}
