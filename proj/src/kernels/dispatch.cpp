#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "mbhd/kernels.hpp"

namespace mbhd::kernels {

namespace {

const KernelTable kScalar{detail::dot_scalar, detail::axpy_scalar, detail::weighted_dot_scalar,
                          detail::axpy_shifted_scalar};

#if defined(MBHD_HAVE_AVX2)
const KernelTable kAvx2{detail::dot_avx2, detail::axpy_avx2, detail::weighted_dot_avx2,
                        detail::axpy_shifted_avx2};
#endif

bool cpu_has_avx2() noexcept {
#if defined(MBHD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("MBHD_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Isa::Avx2;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(MBHD_HAVE_AVX2)
  return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

bool isa_supported(Isa isa) noexcept {
  return isa == Isa::Scalar || (isa == Isa::Avx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) noexcept {
  if (!isa_supported(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

const KernelTable& active() noexcept {
#if defined(MBHD_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}

}  // namespace mbhd::kernels
