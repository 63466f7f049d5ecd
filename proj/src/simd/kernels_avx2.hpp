#pragma once

#include <cstddef>

namespace diffspec::simd::avx2 {

double squared_distance(const double* a, const double* b, std::size_t len);
double sum(const double* x, std::size_t len);
void scale_outer(double* row, const double* col_scale, double row_scale, std::size_t len);

}  // namespace diffspec::simd::avx2
