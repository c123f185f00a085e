#include "mbhd/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "mbhd/error.hpp"
#include "mbhd/kernels.hpp"
#include "mbhd/special.hpp"
#include "parallel.hpp"

namespace mbhd {

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t r) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (r + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct Group {
  Mask x;
  double y;
  double count;
};

// Identical (x, y) observations contribute identical g vectors, so the sums
// run over sorted distinct pairs weighted by multiplicity. The result depends
// only on the multiset of observations.
std::vector<Group> group_observations(const SampleSet& samples, std::span<const double> y) {
  std::vector<std::pair<Mask, double>> obs(samples.size());
  for (std::size_t i = 0; i < obs.size(); ++i) obs[i] = {samples.rows[i], y[i]};
  std::sort(obs.begin(), obs.end());
  std::vector<Group> groups;
  for (std::size_t i = 0; i < obs.size();) {
    std::size_t j = i;
    while (j < obs.size() && obs[j] == obs[i]) ++j;
    groups.push_back({obs[i].first, obs[i].second, static_cast<double>(j - i)});
    i = j;
  }
  return groups;
}

EstimationResult estimate_impl(const SampleSet& samples, std::span<const double> y,
                               const GramSystem& gs) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "estimation needs n >= 2");
  if (samples.d != gs.order().dimension())
    throw Error(ErrorCode::ArityMismatch, "sample dimension does not match the Gram system");
  const auto& basis = gs.basis();
  const std::size_t m = basis.size();
  const auto groups = group_observations(samples, y);

  // g vectors per distinct observation.
  Matrix g(groups.size(), m);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (!basis.defined_at(groups[k].x)) {
      std::ostringstream os;
      os << "sample configuration mask " << groups[k].x << " has a zero marginal under the Gram system's law";
      throw Error(ErrorCode::OffSupportSample, os.str());
    }
    auto row = g.row(k);
    basis.eval_all(groups[k].x, row);
    for (double& v : row) v *= groups[k].y;
  }

  EstimationResult est;
  est.n = n;
  est.order = gs.order();
  est.gram = gs;
  est.mu_hat.assign(m, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < groups.size(); ++k)
    kernels::axpy(groups[k].count * inv_n, g.row(k), est.mu_hat);

  est.sigma_hat = Matrix(m, m);
  const double inv_n1 = 1.0 / static_cast<double>(n - 1);
  const double* mu = est.mu_hat.data();
  detail::parallel_rows(m, [&](std::size_t a) {
    auto out = est.sigma_hat.row(a).subspan(a);
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const double* gk = g.row(k).data();
      kernels::active().axpy_shifted(groups[k].count * inv_n1 * (gk[a] - mu[a]), gk + a, mu + a,
                                     out.data(), m - a);
    }
  });
  est.sigma_hat.symmetrize_from_upper();

  est.beta_hat = gs.solve(est.mu_hat);
  if (gs.empirical()) est.flags.push_back("empirical-gram");
  return est;
}

std::vector<double> model_outputs(const SampleSet& samples, const Model& model) {
  require_arity(model, samples.d);
  std::vector<double> y(samples.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = model(samples.rows[i]);
  return y;
}

}  // namespace

EstimationResult estimate(const SampleSet& samples, const Model& model, const GramSystem& gs) {
  const auto y = model_outputs(samples, model);
  return estimate_impl(samples, y, gs);
}

EstimationResult estimate(const SampleSet& samples, const GramSystem& gs) {
  if (!samples.outputs || samples.outputs->size() != samples.size())
    throw Error(ErrorCode::InvalidArgument, "samples carry no output column");
  return estimate_impl(samples, *samples.outputs, gs);
}

EstimationResult estimate_empirical(const SampleSet& samples, std::optional<int> cap,
                                    const Model* model) {
  if (samples.size() < 2) throw Error(ErrorCode::InsufficientSamples, "estimation needs n >= 2");
  auto order = enumerate_subsets(samples.d, cap);
  const auto gs = GramSystem::from_samples(samples, std::move(order));
  if (model) return estimate(samples, *model, gs);
  return estimate(samples, gs);
}

PredictionWithCI predict_with_ci(const EstimationResult& est, Mask x, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorCode::InvalidArgument, "confidence level must be in (0,1)");
  const auto e = est.gram.basis().eval_all(x);  // throws ZeroMarginal
  PredictionWithCI p;
  p.x = x;
  p.level = level;
  p.g_hat = kernels::dot(est.beta_hat, e);
  const auto v = est.gram.solve(e);
  const auto sv = matvec(est.sigma_hat, v);
  // Tiny negative values from rounding in a PSD form are floored at zero.
  const double q = std::max(0.0, kernels::dot(v, sv));
  p.delta_n = std::sqrt(q / static_cast<double>(est.n));
  const double z = normal_quantile(0.5 + 0.5 * level);
  p.lower = p.g_hat - z * p.delta_n;
  p.upper = p.g_hat + z * p.delta_n;
  return p;
}

BernsteinBound bernstein_bound(const GramSystem& gs, const Model& model, Mask x, std::size_t n,
                               double eps) {
  if (!gs.pmf()) throw Error(ErrorCode::InvalidArgument, "Bernstein bound needs an analytic pmf");
  const JointPmf& pmf = *gs.pmf();
  require_arity(model, pmf.dimension());
  const auto& basis = gs.basis();
  const std::size_t m = basis.size();

  std::vector<double> mu(m, 0.0);
  std::vector<double> e(m);
  const auto probs = pmf.probs();
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (probs[c] == 0.0) continue;
    basis.eval_all(static_cast<Mask>(c), e);
    kernels::axpy(probs[c] * model(static_cast<Mask>(c)), e, mu);
  }
  double sup = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (probs[c] == 0.0) continue;
    basis.eval_all(static_cast<Mask>(c), e);
    const double y = model(static_cast<Mask>(c));
    double s = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      const double dv = e[a] * y - mu[a];
      s += dv * dv;
    }
    sup = std::max(sup, std::sqrt(s));
  }
  const auto ex = basis.eval_all(x);

  BernsteinBound b;
  b.lambda_min = gs.lambda_min();
  b.sup_norm = sup;
  b.e_norm = std::sqrt(kernels::dot(ex, ex));
  b.eps_max = sup * b.e_norm / b.lambda_min;
  if (!(eps >= 0.0 && eps <= b.eps_max)) {
    std::ostringstream os;
    os << "eps " << eps << " outside validity window [0, " << b.eps_max << "]";
    throw Error(ErrorCode::EpsOutOfRange, os.str());
  }
  const double t = (b.sup_norm > 0.0) ? eps * b.lambda_min / (b.sup_norm * b.e_norm) : 0.0;
  b.raw = std::exp(-static_cast<double>(n) / 8.0 * t * t + 0.25);
  b.bound = std::min(1.0, b.raw);
  return b;
}

TruncationErrorReport truncation_error_report(const Decomposition& exact,
                                              const EstimationResult& est, const Model& model,
                                              std::span<const Mask> xs, std::size_t replications,
                                              std::uint64_t seed) {
  if (replications < 2) throw Error(ErrorCode::InsufficientSamples, "need at least two replications");
  const auto& pmf_ptr = est.gram.pmf();
  if (!pmf_ptr) throw Error(ErrorCode::InvalidArgument, "replication needs an analytic pmf");
  const JointPmf& pmf = *pmf_ptr;
  if (exact.mode != DecompositionMode::Exact)
    throw Error(ErrorCode::InvalidArgument, "reference decomposition must be exact");

  // Expected estimator value mu_c^T Gamma_c^{-1} e_c(x) from the exact mu_c.
  const auto mu_c = exact_mu(pmf, model, est.order).mu;
  const auto beta_c = est.gram.solve(mu_c);

  TruncationErrorReport rep;
  rep.cap = est.cap();
  rep.n = est.n;
  rep.replications = replications;
  std::vector<std::vector<double>> preds(xs.size(), std::vector<double>(replications));
  std::vector<std::vector<double>> ex(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ex[i] = est.gram.basis().eval_all(xs[i]);
  for (std::size_t r = 0; r < replications; ++r) {
    const auto s = sample(pmf, est.n, replication_seed(seed, r));
    const auto e = estimate(s, model, est.gram);
    for (std::size_t i = 0; i < xs.size(); ++i) preds[i][r] = kernels::dot(e.beta_hat, ex[i]);
  }
  const double R = static_cast<double>(replications);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    TruncationErrorRow row;
    row.x = xs[i];
    row.g = model(xs[i]);
    row.expected = kernels::dot(beta_c, ex[i]);
    row.bias_sq = (row.g - row.expected) * (row.g - row.expected);
    double mean = 0.0;
    for (double p : preds[i]) mean += p;
    mean /= R;
    double var = 0.0;
    double mse = 0.0;
    for (double p : preds[i]) {
      var += (p - mean) * (p - mean);
      mse += (row.g - p) * (row.g - p);
    }
    row.variance = var / (R - 1.0);
    row.mse = mse / R;
    double sq = 0.0;
    for (double p : preds[i]) {
      const double err2 = (row.g - p) * (row.g - p);
      sq += (err2 - row.mse) * (err2 - row.mse);
    }
    row.mse_se = std::sqrt(sq / (R - 1.0) / R);
    row.consistent = std::abs(row.bias_sq + row.variance - row.mse) <= 3.0 * row.mse_se + 1e-12;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace mbhd
