#include "diffspec/simd/kernels.hpp"

namespace diffspec::simd {
namespace {

double squared_distance_scalar(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

double sum_scalar(const double* x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) acc += x[k];
  return acc;
}

void scale_outer_scalar(double* row, const double* col_scale, double row_scale, std::size_t len) {
  for (std::size_t j = 0; j < len; ++j) row[j] *= row_scale * col_scale[j];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, &squared_distance_scalar, &sum_scalar,
                                 &scale_outer_scalar};
  return table;
}

}  // namespace diffspec::simd
