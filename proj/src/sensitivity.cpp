#include "mbhd/sensitivity.hpp"

#include <sstream>

#include "mbhd/error.hpp"

namespace mbhd {

std::vector<double> shapley_from_dividends(const SubsetOrder& order, std::span<const double> h) {
  if (h.size() != order.size())
    throw Error(ErrorCode::InvalidArgument, "dividend vector does not match the order");
  const int d = order.dimension();
  std::vector<double> sh(static_cast<std::size_t>(d), 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const SubsetId a = order[k];
    if (a.empty()) continue;
    const double share = h[k] / a.size();
    for (int i = 1; i <= d; ++i)
      if (a.contains(i)) sh[static_cast<std::size_t>(i - 1)] += share;
  }
  return sh;
}

SensitivityReport sensitivity(const Decomposition& dec) {
  const auto& gs = dec.gram;
  const Matrix& gamma = gs.gamma();
  const auto beta = dec.active_beta();
  const std::size_t m = beta.size();

  // Var G = beta^T Gamma beta - beta_0^2; with Gamma_{0,A} = 0 for A != 0 this
  // is the quadratic form over the non-empty subsets.
  const auto gb = matvec(gamma, beta);
  double second_moment = 0.0;
  for (std::size_t a = 0; a < m; ++a) second_moment += beta[a] * gb[a];
  const std::size_t empty_idx = gs.order().index_of(SubsetId{0}).value_or(m);
  const double mean = empty_idx < m ? beta[empty_idx] : 0.0;
  const double variance = second_moment - mean * mean;
  if (!(variance >= kZeroVarianceThreshold)) {
    std::ostringstream os;
    os << "output variance " << variance << " below " << kZeroVarianceThreshold;
    throw Error(ErrorCode::ZeroVariance, os.str());
  }

  SensitivityReport rep;
  rep.order = gs.order();
  rep.variance = variance;
  rep.sobol.assign(m, 0.0);
  rep.sobol_var.assign(m, 0.0);
  rep.sobol_cov.assign(m, 0.0);
  rep.sobol_matrix = Matrix(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    if (a == empty_idx) continue;
    double row = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      if (b == empty_idx) continue;
      const double s = beta[a] * beta[b] * gamma(a, b) / variance;
      rep.sobol_matrix(a, b) = s;
      row += s;
    }
    rep.sobol[a] = row;
    rep.sobol_var[a] = rep.sobol_matrix(a, a);
    rep.sobol_cov[a] = row - rep.sobol_var[a];
  }
  for (double s : rep.sobol) rep.sobol_sum += s;
  rep.shapley = shapley_from_dividends(rep.order, rep.sobol);

  if (dec.mode == DecompositionMode::Truncated) {
    rep.approximate = true;
    rep.flags.push_back("approximate");
  }
  if (dec.mode == DecompositionMode::Degenerate && m < dec.order.size())
    rep.flags.push_back("identifiable-subsets-only");
  if (gs.empirical()) rep.flags.push_back("empirical-gram");
  return rep;
}

}  // namespace mbhd
