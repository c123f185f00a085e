#pragma once

#include <span>
#include <string>
#include <vector>

#include "mbhd/decomposition.hpp"
#include "mbhd/linalg.hpp"

namespace mbhd {

/// Variance-based indices derived from (beta, Gamma).
///
/// Vectors are aligned with `order`; in Degenerate mode `order` holds only the
/// identifiable subsets.
struct SensitivityReport {
  SubsetOrder order;
  double variance = 0.0;
  std::vector<double> sobol;      // S_A = Cov(G, G_A) / Var G
  std::vector<double> sobol_var;  // S_A^V = Var G_A / Var G
  std::vector<double> sobol_cov;  // S_A^C = S_A - S_A^V
  Matrix sobol_matrix;            // Cov(G_A, G_B) / Var G
  std::vector<double> shapley;    // length d
  /// Set for truncated decompositions: the indices need not sum to one.
  bool approximate = false;
  double sobol_sum = 0.0;
  std::vector<std::string> flags;
};

/// Throws ZeroVariance when Var G < 1e-14.
SensitivityReport sensitivity(const Decomposition& dec);

/// Sh_i = sum_{A containing i} h(A) / |A|, with h indexed by `order`.
std::vector<double> shapley_from_dividends(const SubsetOrder& order, std::span<const double> h);

inline constexpr double kZeroVarianceThreshold = 1e-14;

}  // namespace mbhd
