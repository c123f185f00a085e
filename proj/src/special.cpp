#include "mbhd/special.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "mbhd/error.hpp"

namespace mbhd {

GaussHermiteRule gauss_hermite_normal(int n) {
  if (n < 1 || n > 1024) throw Error(ErrorCode::InvalidArgument, "quadrature size must be in [1, 1024]");
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
  // polynomials. A three-term Newton recurrence overflows once n is in the
  // hundreds, the eigen route does not.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "Hermite eigenproblem failed");
  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    rule.nodes[static_cast<std::size_t>(k)] = es.eigenvalues()[k];
    const double v = es.eigenvectors()(0, k);
    rule.weights[static_cast<std::size_t>(k)] = v * v;
  }
  // Exact symmetry of the rule keeps symmetric pmfs exactly symmetric.
  for (int k = 0; k < n / 2; ++k) {
    const auto lo = static_cast<std::size_t>(k);
    const auto hi = static_cast<std::size_t>(n - 1 - k);
    const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level must be in (0,1)");
  // Acklam's coefficients.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x = 0.0;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace mbhd
