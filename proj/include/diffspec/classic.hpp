#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "diffspec/dsmi.hpp"
#include "diffspec/spectrum.hpp"
#include "diffspec/types.hpp"

namespace diffspec {

// Equal-width binning after per-dimension min-max normalization. A
// coordinate at normalized value v falls in bin floor(v * bins), with the top
// edge closed onto the last bin; zero-range dimensions put everything in bin 0.
struct BinningConfig {
  std::size_t bins_per_dim = 2;
};

// Per-dimension [min, max] ranges used for normalization.
struct BinRanges {
  std::vector<double> lo;
  std::vector<double> hi;

  static BinRanges of(const Matrix& points);
};

// Occupied buckets only: each point's integer tuple is packed into 64-bit
// words and the packed keys are counted. Returns counts in first-seen order.
std::vector<std::size_t> bucket_counts(const Matrix& points, const std::vector<std::size_t>& rows,
                                       const BinRanges& ranges, std::size_t bins_per_dim);

// Bucket index of one coordinate.
std::size_t bin_of(double value, double lo, double hi, std::size_t bins_per_dim);

// Classic Shannon entropy (bits) of the bucket distribution.
EntropyReport cse(const PointCloud& cloud, const BinningConfig& config = {});

// H(X) - sum_y p(y) H(X | Y = y), with normalization ranges computed once on
// the whole cloud and reused for every class.
MIReport csmi(const PointCloud& cloud, const BinningConfig& config = {});

}  // namespace diffspec
