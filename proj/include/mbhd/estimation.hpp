#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbhd/basis.hpp"
#include "mbhd/decomposition.hpp"
#include "mbhd/model.hpp"
#include "mbhd/pmf.hpp"

namespace mbhd {

/// Plug-in estimates from an i.i.d. sample: mu_hat (sample mean of
/// g(X) = (e_A(X_A) G(X))_A), the unbiased covariance sigma_hat of g(X), and
/// beta_hat = Gamma^{-1} mu_hat on the Gram system's (possibly capped) order.
struct EstimationResult {
  std::size_t n = 0;
  SubsetOrder order;
  std::vector<double> mu_hat;
  Matrix sigma_hat;
  std::vector<double> beta_hat;
  GramSystem gram;
  std::vector<std::string> flags;

  std::optional<int> cap() const noexcept { return order.cap(); }
};

EstimationResult estimate(const SampleSet& samples, const Model& model, const GramSystem& gs);
/// Uses samples.outputs as the model values.
EstimationResult estimate(const SampleSet& samples, const GramSystem& gs);
/// Samples only: marginals and Gamma_hat come from the sample itself; the
/// result carries the "empirical-gram" flag.
EstimationResult estimate_empirical(const SampleSet& samples, std::optional<int> cap,
                                    const Model* model = nullptr);

struct PredictionWithCI {
  Mask x = 0;
  double g_hat = 0.0;
  double delta_n = 0.0;
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;
};

/// G_hat(x) = beta_hat^T e(x) with the interval G_hat +- z * delta_n,
/// delta_n^2 = e(x)^T Gamma^{-1} Sigma_hat Gamma^{-1} e(x) / n.
PredictionWithCI predict_with_ci(const EstimationResult& est, Mask x, double level = 0.95);

struct BernsteinBound {
  double bound = 1.0;      // clipped at 1
  double raw = 1.0;        // unclipped exp(...)
  double lambda_min = 0.0;
  double sup_norm = 0.0;   // max_x ||g(x) - mu||_2
  double e_norm = 0.0;     // ||e(x)||_2
  double eps_max = 0.0;    // upper end of the validity window
};

/// P(|G_hat_n(x) - G(x)| > eps) <= exp(-(n/8) (eps lambda_min / (sup_norm ||e(x)||))^2 + 1/4).
/// Throws EpsOutOfRange outside [0, sup_norm ||e(x)|| / lambda_min].
BernsteinBound bernstein_bound(const GramSystem& gs, const Model& model, Mask x, std::size_t n,
                               double eps);

struct TruncationErrorRow {
  Mask x = 0;
  double g = 0.0;            // G(x)
  double expected = 0.0;     // mu_c^T Gamma_c^{-1} e_c(x)
  double bias_sq = 0.0;
  double variance = 0.0;     // across replications (unbiased)
  double mse = 0.0;          // replicated mean squared error
  double mse_se = 0.0;       // standard error of mse
  bool consistent = false;   // |bias_sq + variance - mse| <= 3 mse_se
};

struct TruncationErrorReport {
  std::optional<int> cap;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::vector<TruncationErrorRow> rows;
};

/// Replicates the estimator of `est` (same n, same Gram system) on fresh
/// samples from the analytic pmf and splits its error at each x into squared
/// bias and variance.
TruncationErrorReport truncation_error_report(const Decomposition& exact,
                                              const EstimationResult& est, const Model& model,
                                              std::span<const Mask> xs, std::size_t replications,
                                              std::uint64_t seed);

/// Stream seed for replication r derived from a base seed (splitmix64).
std::uint64_t replication_seed(std::uint64_t base, std::uint64_t r) noexcept;

}  // namespace mbhd
