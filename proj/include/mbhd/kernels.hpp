#pragma once

// Inner-loop arithmetic shared by Gram assembly, factorization, and the
// sample accumulators. Each kernel has a scalar reference and an AVX2+FMA
// variant; the variant is picked once at startup from CPUID and can be
// forced with MBHD_KERNELS=scalar|avx2.

#include <cstddef>
#include <span>
#include <string_view>

namespace mbhd::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// sum_i w_i a_i b_i
  double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);
  /// y += alpha * (x - shift)
  void (*axpy_shifted)(double alpha, const double* x, const double* shift, double* y,
                       std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;

bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Overrides the startup choice; returns false if the ISA is unavailable.
bool set_active_isa(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double weighted_dot(std::span<const double> w, std::span<const double> a,
                           std::span<const double> b) noexcept {
  return active().weighted_dot(w.data(), a.data(), b.data(), w.size());
}

}  // namespace mbhd::kernels
