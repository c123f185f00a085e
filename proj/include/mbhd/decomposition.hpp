#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mbhd/basis.hpp"
#include "mbhd/model.hpp"
#include "mbhd/pmf.hpp"

namespace mbhd {

enum class DecompositionMode { Exact, Truncated, Degenerate };
std::string_view to_string(DecompositionMode mode) noexcept;

/// mu_A = E[e_A(X_A) G(X)] over an order.
struct MuVector {
  SubsetOrder order;
  std::vector<double> mu;
};

/// Coefficients beta_A of G = sum_A beta_A e_A(X_A).
struct Decomposition {
  DecompositionMode mode = DecompositionMode::Exact;
  SubsetOrder order;
  std::vector<double> beta;
  /// False only in Degenerate mode, for subsets outside the retained column set J.
  std::vector<bool> identifiable;
  /// Gram system over the identifiable subsets, in order.
  GramSystem gram;
  /// For each identifiable subset, its index in `order`.
  std::vector<std::size_t> active;
  /// max_i |(Gamma beta - mu)_i| / ||mu||_inf, or the configuration-system
  /// residual in Degenerate mode.
  double residual = 0.0;

  std::optional<int> cap() const noexcept { return order.cap(); }
  const JointPmf& pmf() const { return *gram.pmf(); }
  /// beta over the identifiable subsets only (aligned with gram.order()).
  std::vector<double> active_beta() const;
};

/// Exact sums over the support. Requires full support.
MuVector exact_mu(const JointPmf& pmf, const Model& model, const SubsetOrder& order);

/// Full decomposition: solves Gamma beta = mu on all 2^d subsets.
Decomposition decompose(const JointPmf& pmf, const Model& model);
/// Reuses an assembled Gram system. Full orders give Exact mode, capped orders
/// give the reduced system Gamma_c beta_c = mu_c (Truncated mode).
Decomposition decompose(const GramSystem& gs, const Model& model);
Decomposition decompose_truncated(const JointPmf& pmf, const Model& model, int cap);

/// Identifiable sub-decomposition on a support with r < 2^{d-1} zero cells.
Decomposition degenerate_decompose(const JointPmf& pmf, const Model& model);

/// G_A(x_A) = beta_A e_A(x_A); throws ZeroMarginal off the support and
/// InvalidArgument for unidentifiable subsets.
double component_eval(const Decomposition& dec, SubsetId a, Mask x);
/// sum over identifiable A of G_A(x_A).
double reconstruct(const Decomposition& dec, Mask x);

/// Column selection for a configuration matrix: keeps, in column order, each
/// column whose eliminated pivot exceeds rel_tol times its largest entry.
std::vector<std::size_t> select_independent_columns(const Matrix& e, double rel_tol = 1e-10);

}  // namespace mbhd
