#include "kernels_impl.hpp"

namespace mbhd::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_dot_scalar(const double* w, const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

void axpy_shifted_scalar(double alpha, const double* x, const double* shift, double* y,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * (x[i] - shift[i]);
}

}  // namespace mbhd::kernels::detail
