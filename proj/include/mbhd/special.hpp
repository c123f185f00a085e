#pragma once

#include <vector>

namespace mbhd {

/// Nodes and weights for integrals against the standard normal density:
/// sum_k weight[k] * f(node[k]) ~ E[f(W)], W ~ N(0,1).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_normal(int n);

double normal_cdf(double x) noexcept;
/// Rational approximation refined by one Halley step (|error| < 1e-12 in the body).
double normal_quantile(double p);

}  // namespace mbhd
