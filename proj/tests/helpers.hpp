#pragma once
// Random fixtures and brute-force oracles shared by the unit tests and the
// acceptance runner. Oracles enumerate configurations directly and never
// touch the Gram system.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mbhd/decomposition.hpp"
#include "mbhd/model.hpp"
#include "mbhd/pmf.hpp"

namespace testutil {

using mbhd::JointPmf;
using mbhd::Mask;
using mbhd::Model;

/// Full-support pmf with cells drawn from Gamma(shape) then normalized.
inline JointPmf random_pmf(int d, std::mt19937_64& rng, double shape = 1.0, double floor = 1e-3) {
  std::gamma_distribution<double> g(shape, 1.0);
  std::vector<double> p(std::size_t{1} << d);
  double s = 0.0;
  for (double& v : p) {
    v = g(rng) + floor;
    s += v;
  }
  for (double& v : p) v /= s;
  return JointPmf::from_table(std::move(p));
}

inline std::vector<double> random_marginals(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 0.9);
  std::vector<double> q(static_cast<std::size_t>(d));
  for (double& v : q) v = u(rng);
  return q;
}

inline Model random_model(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(std::size_t{1} << d);
  for (double& x : v) x = n(rng);
  return Model::truth_table(std::move(v));
}

/// Model that depends only on the inputs in `keep`.
inline Model random_model_on(int d, Mask keep, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> table(std::size_t{1} << std::popcount(keep));
  for (double& x : table) x = n(rng);
  return Model::tabulate(d, [&](Mask x) { return table[mbhd::compress_bits(x, keep)]; });
}

inline double expect(const JointPmf& p, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) s += p(static_cast<Mask>(x)) * f[x];
  return s;
}

inline std::vector<double> values(const Model& m) {
  std::vector<double> v(std::size_t{1} << m.arity());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = m(static_cast<Mask>(x));
  return v;
}

/// E[G | X_B = x_B] as a function of x.
inline std::vector<double> conditional_mean(const JointPmf& p, const std::vector<double>& g, Mask b) {
  const std::size_t n = g.size();
  std::vector<double> num(n, 0.0), den(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const Mask key = static_cast<Mask>(x) & b;
    num[key] += p(static_cast<Mask>(x)) * g[x];
    den[key] += p(static_cast<Mask>(x));
  }
  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    const Mask key = static_cast<Mask>(x) & b;
    out[x] = num[key] / den[key];
  }
  return out;
}

/// Classical Hoeffding component under independence by inclusion-exclusion:
/// G_A = sum_{B subset A} (-1)^{|A|-|B|} E[G | X_B].
inline std::vector<double> classical_component(const JointPmf& p, const std::vector<double>& g, Mask a) {
  std::vector<double> out(g.size(), 0.0);
  Mask b = a;
  while (true) {
    const auto cm = conditional_mean(p, g, b);
    const double sign = ((std::popcount(a) - std::popcount(b)) & 1) ? -1.0 : 1.0;
    for (std::size_t x = 0; x < g.size(); ++x) out[x] += sign * cm[x];
    if (b == 0) break;
    b = (b - 1) & a;
  }
  return out;
}

/// Component G_A(x) = beta_A e_A(x) from a decomposition, as a vector over configs.
inline std::vector<double> component_values(const mbhd::Decomposition& dec, mbhd::SubsetId a) {
  std::vector<double> v(dec.pmf().cells());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = mbhd::component_eval(dec, a, static_cast<Mask>(x));
  return v;
}

}  // namespace testutil

namespace testutil {

/// Single-zero d=2 law from marginals (q1, q2) and rho = E[X1 X2].
inline JointPmf two_by_two(double q1, double q2, double rho) {
  std::vector<double> cells{1.0 - q1 - q2 + rho, q1 - rho, q2 - rho, rho};
  // Cancellation can leave -1e-16 where the cell is exactly zero.
  for (double& c : cells)
    if (std::abs(c) < 1e-14) c = 0.0;
  return JointPmf::from_table(cells);
}

/// Reference closed forms for the four single-zero d=2 cases. y[a][b] is G at
/// x1 = a, x2 = b. g1[v] and g2[v] are the main-effect components at x_i = v.
struct DegenerateCase {
  int index;        // 1..4
  double rho;
  double beta0;
  double g1[2];
  double g2[2];
  Mask zero_cell;
};

inline DegenerateCase degenerate_case(int which, double q1, double q2, const double y[2][2]) {
  const double y00 = y[0][0], y01 = y[0][1], y10 = y[1][0], y11 = y[1][1];
  DegenerateCase c{};
  c.index = which;
  double a1 = 0, a2 = 0;  // differences driving the main effects
  switch (which) {
    case 1:
      c.rho = 0.0;
      c.zero_cell = 3;
      c.beta0 = q1 * y10 + q2 * y01 - y00 * (q1 + q2 - 1);
      a1 = y00 - y10;
      a2 = y00 - y01;
      break;
    case 2:
      c.rho = q1;
      c.zero_cell = 1;
      c.beta0 = q1 * y11 - y00 * (q2 - 1) - y01 * (q1 - q2);
      a1 = y01 - y11;
      a2 = y00 - y01;
      break;
    case 3:
      c.rho = q2;
      c.zero_cell = 2;
      c.beta0 = q2 * y11 - y00 * (q1 - 1) + y10 * (q1 - q2);
      a1 = y00 - y10;
      a2 = y10 - y11;
      break;
    default:
      c.rho = q1 + q2 - 1;
      c.zero_cell = 0;
      c.beta0 = -y01 * (q1 - 1) - y10 * (q2 - 1) + y11 * (q1 + q2 - 1);
      a1 = y01 - y11;
      a2 = y10 - y11;
      break;
  }
  c.g1[0] = q1 * a1;
  c.g1[1] = (q1 - 1) * a1;
  c.g2[0] = q2 * a2;
  c.g2[1] = (q2 - 1) * a2;
  return c;
}

/// Marginals valid for case `which` (single zero, no collapse).
inline std::pair<double, double> degenerate_marginals(int which, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  while (true) {
    const double q1 = u(rng), q2 = u(rng);
    const bool ok = (which == 1 && q1 + q2 < 0.95) || (which == 2 && q2 - q1 > 0.05) ||
                    (which == 3 && q1 - q2 > 0.05) || (which == 4 && q1 + q2 > 1.05);
    if (ok) return {q1, q2};
  }
}

}  // namespace testutil
