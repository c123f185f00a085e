#pragma once

#include <cstddef>

namespace mbhd::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double weighted_dot_scalar(const double* w, const double* a, const double* b, std::size_t n);
void axpy_shifted_scalar(double alpha, const double* x, const double* shift, double* y,
                         std::size_t n);

#if defined(MBHD_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double weighted_dot_avx2(const double* w, const double* a, const double* b, std::size_t n);
void axpy_shifted_avx2(double alpha, const double* x, const double* shift, double* y,
                       std::size_t n);
#endif

}  // namespace mbhd::kernels::detail
