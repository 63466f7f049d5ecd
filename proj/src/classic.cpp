#include "diffspec/classic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "diffspec/error.hpp"

namespace diffspec {
namespace {

struct PackedKeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : key) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

double entropy_of_counts(const std::vector<std::size_t>& counts) {
  std::vector<double> w(counts.begin(), counts.end());
  return shannon_bits(w);
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

void check_config(const BinningConfig& config) {
  if (config.bins_per_dim < 2) throw InvalidInput("bins_per_dim must be at least 2");
}

}  // namespace

BinRanges BinRanges::of(const Matrix& points) {
  BinRanges r;
  r.lo.resize(static_cast<std::size_t>(points.cols()));
  r.hi.resize(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    r.lo[static_cast<std::size_t>(j)] = points.col(j).minCoeff();
    r.hi[static_cast<std::size_t>(j)] = points.col(j).maxCoeff();
  }
  return r;
}

std::size_t bin_of(double value, double lo, double hi, std::size_t bins_per_dim) {
  const double range = hi - lo;
  if (!(range > 0.0)) return 0;
  const double v = (value - lo) / range;
  if (!(v > 0.0)) return 0;
  const auto b = static_cast<std::size_t>(v * static_cast<double>(bins_per_dim));
  return std::min(b, bins_per_dim - 1);
}

std::vector<std::size_t> bucket_counts(const Matrix& points, const std::vector<std::size_t>& rows,
                                       const BinRanges& ranges, std::size_t bins_per_dim) {
  const auto dim = static_cast<std::size_t>(points.cols());
  const int bits = std::bit_width(bins_per_dim - 1);
  const std::size_t per_word = static_cast<std::size_t>(64 / bits);
  const std::size_t words = (dim + per_word - 1) / per_word;

  std::unordered_map<std::vector<std::uint64_t>, std::size_t, PackedKeyHash> index;
  std::vector<std::size_t> counts;
  std::vector<std::uint64_t> key(words);
  for (std::size_t r : rows) {
    std::fill(key.begin(), key.end(), 0);
    const auto row = static_cast<Eigen::Index>(r);
    for (std::size_t j = 0; j < dim; ++j) {
      const std::uint64_t b =
          bin_of(points(row, static_cast<Eigen::Index>(j)), ranges.lo[j], ranges.hi[j], bins_per_dim);
      key[j / per_word] |= b << ((j % per_word) * static_cast<std::size_t>(bits));
    }
    auto [it, inserted] = index.try_emplace(key, counts.size());
    if (inserted) {
      counts.push_back(1);
    } else {
      ++counts[it->second];
    }
  }
  return counts;
}

EntropyReport cse(const PointCloud& cloud, const BinningConfig& config) {
  cloud.validate();
  check_config(config);
  const BinRanges ranges = BinRanges::of(cloud.points);
  EntropyReport r;
  r.method = EntropyMethod::CSE;
  r.value = entropy_of_counts(bucket_counts(cloud.points, all_rows(cloud.size()), ranges,
                                            config.bins_per_dim));
  r.n = cloud.size();
  r.dim = cloud.dim();
  r.bins_per_dim = config.bins_per_dim;
  return r;
}

MIReport csmi(const PointCloud& cloud, const BinningConfig& config) {
  cloud.validate();
  check_config(config);
  if (!cloud.has_labels()) throw InvalidInput("csmi requires labels");
  const int classes = cloud.num_classes();
  const auto members = class_members(*cloud.labels, classes);
  const BinRanges ranges = BinRanges::of(cloud.points);

  MIReport r;
  r.method = "CSMI";
  r.n = cloud.size();
  r.dim = cloud.dim();
  r.bins_per_dim = config.bins_per_dim;
  const double joint =
      entropy_of_counts(bucket_counts(cloud.points, all_rows(cloud.size()), ranges, config.bins_per_dim));
  double conditional = 0.0;
  for (const auto& rows : members) {
    if (rows.empty()) throw InvalidInput("csmi: every class in [0, C) must be non-empty");
    const double h = entropy_of_counts(bucket_counts(cloud.points, rows, ranges, config.bins_per_dim));
    const double weight = static_cast<double>(rows.size()) / static_cast<double>(cloud.size());
    conditional += weight * h;
    r.conditional_entropies.push_back(h);
    r.unconditional_entropies.push_back(joint);
    r.class_sizes.push_back(rows.size());
  }
  r.value = joint - conditional;
  return r;
}

}  // namespace diffspec
