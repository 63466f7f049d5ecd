// Compiled with -mavx2 -mfma. Only reachable through the dispatch table after
// a runtime CPU check, so nothing here may be inlined into generic code.
#include <immintrin.h>

#include "kernels_avx2.hpp"

namespace diffspec::simd::avx2 {
namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

double squared_distance(const double* a, const double* b, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 16 <= len; k += 16) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
    const __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(a + k + 8), _mm256_loadu_pd(b + k + 8));
    const __m256d d3 = _mm256_sub_pd(_mm256_loadu_pd(a + k + 12), _mm256_loadu_pd(b + k + 12));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    acc2 = _mm256_fmadd_pd(d2, d2, acc2);
    acc3 = _mm256_fmadd_pd(d3, d3, acc3);
  }
  for (; k + 4 <= len; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc0 = _mm256_fmadd_pd(d, d, acc0);
  }
  double acc = horizontal_sum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; k < len; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

double sum(const double* x, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + k));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + k + 4));
  }
  for (; k + 4 <= len; k += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + k));
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; k < len; ++k) acc += x[k];
  return acc;
}

void scale_outer(double* row, const double* col_scale, double row_scale, std::size_t len) {
  const __m256d s = _mm256_set1_pd(row_scale);
  std::size_t j = 0;
  for (; j + 4 <= len; j += 4) {
    const __m256d f = _mm256_mul_pd(s, _mm256_loadu_pd(col_scale + j));
    _mm256_storeu_pd(row + j, _mm256_mul_pd(_mm256_loadu_pd(row + j), f));
  }
  for (; j < len; ++j) row[j] *= row_scale * col_scale[j];
}

}  // namespace diffspec::simd::avx2
