#include <cstdlib>
#include <string>

#include "diffspec/simd/kernels.hpp"

#if defined(DIFFSPEC_HAVE_AVX2)
#include "kernels_avx2.hpp"
#endif

namespace diffspec::simd {
namespace {

#if defined(DIFFSPEC_HAVE_AVX2)
bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::Avx2, &avx2::squared_distance, &avx2::sum,
                                 &avx2::scale_outer};
  return table;
}
#endif

const KernelTable& select_active() {
  if (const char* env = std::getenv("DIFFSPEC_SIMD")) {
    if (std::string(env) == "scalar") return scalar_kernels();
  }
  if (const KernelTable* avx = kernels_for(Isa::Avx2)) return *avx;
  return scalar_kernels();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &scalar_kernels();
    case Isa::Avx2:
#if defined(DIFFSPEC_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_kernels();
#endif
      return nullptr;
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (kernels_for(Isa::Avx2) != nullptr) out.push_back(Isa::Avx2);
  return out;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_active();
  return table;
}

}  // namespace diffspec::simd
