#include "mbhd/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mbhd/error.hpp"
#include "mbhd/kernels.hpp"
#include "parallel.hpp"

namespace mbhd {

namespace {

[[noreturn]] void throw_zero_marginal(SubsetId a, Mask x, int d) {
  std::ostringstream os;
  os << "marginal of " << format_subset(a) << " vanishes at configuration (";
  for (int i = 0; i < d; ++i) os << (i ? "," : "") << ((x >> i) & 1u);
  os << ")";
  throw Error(ErrorCode::ZeroMarginal, os.str());
}

// Marginal tables for every subset of a full order: each table is obtained
// from the table of a one-larger superset, for 2 * 3^d work in total.
std::vector<std::vector<double>> all_marginals(const JointPmf& pmf) {
  const int d = pmf.dimension();
  const std::size_t n = std::size_t{1} << d;
  std::vector<std::vector<double>> by_mask(n);
  const Mask full = static_cast<Mask>(n - 1);
  by_mask[full].assign(pmf.probs().begin(), pmf.probs().end());
  // Descending popcount guarantees the superset exists.
  for (int size = d - 1; size >= 0; --size) {
    for (std::size_t m = 0; m < n; ++m) {
      const auto a = static_cast<Mask>(m);
      if (std::popcount(a) != size) continue;
      const Mask missing = full & ~a;
      const Mask low = missing & (~missing + 1);
      const Mask sup = a | low;
      const auto& parent = by_mask[sup];
      // Position of the dropped coordinate inside the parent's pattern.
      const int pos = std::popcount(sup & (low - 1));
      std::vector<double> t(std::size_t{1} << size, 0.0);
      for (std::size_t pat = 0; pat < parent.size(); ++pat) {
        const std::size_t lowbits = pat & ((std::size_t{1} << pos) - 1);
        const std::size_t highbits = (pat >> (pos + 1)) << pos;
        t[lowbits | highbits] += parent[pat];
      }
      by_mask[m] = std::move(t);
    }
  }
  return by_mask;
}

}  // namespace

BasisEvaluator::BasisEvaluator(const JointPmf& pmf, SubsetOrder order) : order_(std::move(order)) {
  if (order_.dimension() != pmf.dimension())
    throw Error(ErrorCode::InvalidArgument, "order and pmf dimensions differ");
  marginals_.resize(order_.size());
  if (order_.is_full()) {
    auto by_mask = all_marginals(pmf);
    for (std::size_t k = 0; k < order_.size(); ++k)
      marginals_[k] = std::move(by_mask[order_[k].mask]);
  } else {
    for (std::size_t k = 0; k < order_.size(); ++k)
      marginals_[k] = marginal(pmf, order_[k]).probs;
  }
}

BasisEvaluator BasisEvaluator::from_samples(const SampleSet& samples, SubsetOrder order) {
  if (samples.size() == 0) throw Error(ErrorCode::InsufficientSamples, "no samples");
  if (order.dimension() != samples.d)
    throw Error(ErrorCode::InvalidArgument, "order and sample dimensions differ");
  BasisEvaluator b;
  b.order_ = std::move(order);
  b.marginals_.resize(b.order_.size());
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  for (std::size_t k = 0; k < b.order_.size(); ++k) {
    const SubsetId a = b.order_[k];
    std::vector<double> t(std::size_t{1} << a.size(), 0.0);
    for (Mask x : samples.rows) t[compress_bits(x, a.mask)] += 1.0;
    for (double& v : t) v *= inv_n;
    b.marginals_[k] = std::move(t);
  }
  return b;
}

double BasisEvaluator::eval(std::size_t k, Mask x) const {
  const SubsetId a = order_[k];
  const double p = marginal_prob(k, x);
  if (p <= 0.0) throw_zero_marginal(a, x, dimension());
  return parity_sign(x, a) / p;
}

void BasisEvaluator::eval_all(Mask x, std::span<double> out) const {
  for (std::size_t k = 0; k < order_.size(); ++k) out[k] = eval(k, x);
}

std::vector<double> BasisEvaluator::eval_all(Mask x) const {
  std::vector<double> out(order_.size());
  eval_all(x, out);
  return out;
}

bool BasisEvaluator::defined_at(Mask x) const noexcept {
  for (std::size_t k = 0; k < order_.size(); ++k)
    if (!(marginal_prob(k, x) > 0.0)) return false;
  return true;
}

double eval_basis(const JointPmf& pmf, SubsetId a, Mask x) {
  if (a.empty()) return 1.0;
  const auto t = marginal(pmf, a);
  const double p = t.at_config(x);
  if (p <= 0.0) throw_zero_marginal(a, x, pmf.dimension());
  return parity_sign(x, a) / p;
}

double GramSystem::lambda_min() const {
  std::call_once(state_->lambda_once, [this] {
    state_->lambda = smallest_eigenvalue(state_->gamma, state_->factor).value;
  });
  return state_->lambda;
}

GramSystem GramSystem::from_parts(BasisEvaluator basis, Matrix gamma,
                                  std::shared_ptr<const JointPmf> pmf, bool empirical) {
  auto factor = Cholesky::factor(gamma, 1e-10);
  auto st = std::make_shared<const State>(std::move(basis), std::move(gamma), std::move(factor),
                                          std::move(pmf), empirical);
  GramSystem gs;
  gs.state_ = std::move(st);
  return gs;
}

namespace {

// Accumulates Gamma += sum_x w_x e(x) e(x)^T over the given configurations in
// ascending order. Only the upper triangle is written; every row is owned by a
// single worker and sums configurations in the same order, so the result is
// independent of the worker count.
void accumulate_gram(const BasisEvaluator& basis, std::span<const Mask> configs,
                     std::span<const double> weights, Matrix& gamma) {
  const std::size_t m = basis.size();
  std::vector<double> block(kAssemblyBlock * m);
  for (std::size_t start = 0; start < configs.size(); start += kAssemblyBlock) {
    const std::size_t len = std::min(kAssemblyBlock, configs.size() - start);
    for (std::size_t b = 0; b < len; ++b)
      basis.eval_all(configs[start + b], std::span<double>(block.data() + b * m, m));
    detail::parallel_rows(m, [&](std::size_t a) {
      auto row = gamma.row(a).subspan(a);
      for (std::size_t b = 0; b < len; ++b) {
        const double* eb = block.data() + b * m;
        kernels::axpy(weights[start + b] * eb[a], std::span<const double>(eb + a, m - a), row);
      }
    });
  }
  gamma.symmetrize_from_upper();
}

}  // namespace

GramSystem GramSystem::assemble(std::shared_ptr<const JointPmf> pmf, SubsetOrder order,
                                bool allow_zero_cells) {
  if (!pmf) throw Error(ErrorCode::InvalidArgument, "null pmf");
  if (!allow_zero_cells && !pmf->full_support())
    throw Error(ErrorCode::NotFullSupport,
                "Gram matrix needs full support; " + std::to_string(pmf->support().zero_cells) +
                    " configuration(s) have zero probability (use the degenerate path)");
  BasisEvaluator basis(*pmf, std::move(order));
  std::vector<Mask> configs;
  std::vector<double> weights;
  const auto probs = pmf->probs();
  for (std::size_t x = 0; x < probs.size(); ++x) {
    if (probs[x] == 0.0) continue;
    configs.push_back(static_cast<Mask>(x));
    weights.push_back(probs[x]);
  }
  Matrix gamma(basis.size(), basis.size());
  accumulate_gram(basis, configs, weights, gamma);
  return from_parts(std::move(basis), std::move(gamma), std::move(pmf), false);
}

GramSystem GramSystem::from_samples(const SampleSet& samples, SubsetOrder order) {
  auto basis = BasisEvaluator::from_samples(samples, std::move(order));
  // Sample average of e e^T equals the exact Gram matrix of the empirical law:
  // accumulate once per distinct configuration with its frequency.
  std::vector<Mask> rows(samples.rows);
  std::sort(rows.begin(), rows.end());
  std::vector<Mask> configs;
  std::vector<double> weights;
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    while (j < rows.size() && rows[j] == rows[i]) ++j;
    configs.push_back(rows[i]);
    weights.push_back(static_cast<double>(j - i) * inv_n);
    i = j;
  }
  Matrix gamma(basis.size(), basis.size());
  accumulate_gram(basis, configs, weights, gamma);
  return from_parts(std::move(basis), std::move(gamma), nullptr, true);
}

GramSystem GramSystem::truncated(int cap) const {
  const auto& ord = order();
  if (cap < 0 || cap > ord.dimension())
    throw Error(ErrorCode::InvalidArgument, "cap must be in [0, d]");
  std::vector<std::size_t> idx;
  std::vector<SubsetId> subs;
  for (std::size_t k = 0; k < ord.size(); ++k)
    if (ord[k].size() <= cap) {
      idx.push_back(k);
      subs.push_back(ord[k]);
    }
  SubsetOrder capped(ord.dimension(), std::move(subs), cap);
  Matrix sub = gamma().submatrix(idx);
  if (pmf()) {
    BasisEvaluator b(*pmf(), capped);
    return from_parts(std::move(b), std::move(sub), pmf(), empirical());
  }
  // Sample-based: reuse marginal tables of the retained subsets.
  throw Error(ErrorCode::InvalidArgument,
              "truncating a sample-averaged Gram matrix is not supported; rebuild from samples");
}

GramSystem gram_matrix(const JointPmf& pmf, const SubsetOrder& order) {
  return GramSystem::assemble(std::make_shared<const JointPmf>(pmf), order, false);
}

DualCoefficients dual_coefficients(const GramSystem& gs) {
  return DualCoefficients{gs.order(), gs.factor().inverse()};
}

std::vector<double> basis_values(const BasisEvaluator& basis, std::size_t k, const JointPmf& pmf) {
  std::vector<double> v(pmf.cells(), 0.0);
  for (std::size_t x = 0; x < v.size(); ++x)
    if (pmf(static_cast<Mask>(x)) > 0.0) v[x] = basis.eval(k, static_cast<Mask>(x));
  return v;
}

std::vector<double> dual_values(const DualCoefficients& dual, const BasisEvaluator& basis,
                                std::size_t k) {
  const int d = basis.dimension();
  const std::size_t cells = std::size_t{1} << d;
  std::vector<double> out(cells, 0.0);
  std::vector<double> e(basis.size());
  for (std::size_t x = 0; x < cells; ++x) {
    if (!basis.defined_at(static_cast<Mask>(x))) continue;
    basis.eval_all(static_cast<Mask>(x), e);
    out[x] = kernels::dot(dual.inverse.row(k), e);
  }
  return out;
}

double inner_product(std::span<const double> u, std::span<const double> v, const JointPmf& pmf) {
  if (u.size() != pmf.cells() || v.size() != pmf.cells())
    throw Error(ErrorCode::InvalidArgument, "function tables must have 2^d entries");
  return kernels::weighted_dot(pmf.probs(), u, v);
}

double angle(std::span<const double> u, std::span<const double> v, const JointPmf& pmf) {
  const double uu = inner_product(u, u, pmf);
  const double vv = inner_product(v, v, pmf);
  if (!(uu > 0.0) || !(vv > 0.0)) throw Error(ErrorCode::ZeroNorm, "angle with a zero-norm vector");
  const double c = inner_product(u, v, pmf) / std::sqrt(uu * vv);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace mbhd
