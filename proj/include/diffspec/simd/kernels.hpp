#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Inner loops shared by the kernel, clustering and distance code. Each entry
// has a portable scalar reference and, where the build and the CPU allow it,
// an AVX2+FMA variant. The active table is chosen once per process.
namespace diffspec::simd {

enum class Isa {
  Scalar,
  Avx2,
};

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_k (a[k] - b[k])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t len);
  // sum_k x[k]
  double (*sum)(const double* x, std::size_t len);
  // row[j] *= row_scale * col_scale[j]; the product row_scale * col_scale[j]
  // is formed first so that (i, j) and (j, i) round identically.
  void (*scale_outer)(double* row, const double* col_scale, double row_scale, std::size_t len);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);

// Every variant usable on this machine, scalar first.
std::vector<Isa> available_isas();

// Best available table, unless DIFFSPEC_SIMD=scalar is set in the environment.
const KernelTable& active_kernels();

}  // namespace diffspec::simd
