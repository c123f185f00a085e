#include "mbhd/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbhd/error.hpp"
#include "mbhd/kernels.hpp"

namespace mbhd {

std::string_view to_string(DecompositionMode mode) noexcept {
  switch (mode) {
    case DecompositionMode::Exact: return "exact";
    case DecompositionMode::Truncated: return "truncated";
    case DecompositionMode::Degenerate: return "degenerate";
  }
  return "unknown";
}

std::vector<double> Decomposition::active_beta() const {
  std::vector<double> b(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) b[k] = beta[active[k]];
  return b;
}

namespace {

std::vector<double> mu_over_support(const BasisEvaluator& basis, const JointPmf& pmf,
                                    const Model& model) {
  std::vector<double> mu(basis.size(), 0.0);
  std::vector<double> e(basis.size());
  const auto probs = pmf.probs();
  for (std::size_t x = 0; x < probs.size(); ++x) {
    if (probs[x] == 0.0) continue;
    basis.eval_all(static_cast<Mask>(x), e);
    kernels::axpy(probs[x] * model(static_cast<Mask>(x)), e, mu);
  }
  return mu;
}

double relative_residual(const Matrix& gamma, std::span<const double> beta,
                         std::span<const double> mu) {
  const auto r = matvec(gamma, beta);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    num = std::max(num, std::abs(r[i] - mu[i]));
    den = std::max(den, std::abs(mu[i]));
  }
  return den > 0.0 ? num / den : num;
}

constexpr double kResidualTolerance = 1e-9;

void check_residual(double residual, const char* what) {
  if (!(residual <= kResidualTolerance)) {
    std::ostringstream os;
    os << what << " residual " << residual << " exceeds " << kResidualTolerance;
    throw Error(ErrorCode::IllConditioned, os.str());
  }
}

}  // namespace

MuVector exact_mu(const JointPmf& pmf, const Model& model, const SubsetOrder& order) {
  if (!pmf.full_support())
    throw Error(ErrorCode::NotFullSupport, "exact mu needs a full-support pmf");
  require_arity(model, pmf.dimension());
  BasisEvaluator basis(pmf, order);
  return MuVector{order, mu_over_support(basis, pmf, model)};
}

Decomposition decompose(const GramSystem& gs, const Model& model) {
  if (!gs.pmf())
    throw Error(ErrorCode::InvalidArgument, "exact decomposition needs a Gram system built from a pmf");
  const JointPmf& pmf = *gs.pmf();
  require_arity(model, pmf.dimension());
  const auto mu = mu_over_support(gs.basis(), pmf, model);
  Decomposition dec;
  dec.mode = gs.order().is_full() ? DecompositionMode::Exact : DecompositionMode::Truncated;
  dec.order = gs.order();
  dec.beta = gs.solve(mu);
  dec.identifiable.assign(dec.beta.size(), true);
  dec.gram = gs;
  dec.active.resize(dec.beta.size());
  for (std::size_t k = 0; k < dec.active.size(); ++k) dec.active[k] = k;
  dec.residual = relative_residual(gs.gamma(), dec.beta, mu);
  check_residual(dec.residual, "Gram system");
  return dec;
}

Decomposition decompose(const JointPmf& pmf, const Model& model) {
  require_arity(model, pmf.dimension());
  if (!pmf.full_support())
    throw Error(ErrorCode::NotFullSupport,
                "decompose needs full support; use degenerate_decompose for zero cells");
  auto order = enumerate_subsets(pmf.dimension());
  auto gs = GramSystem::assemble(std::make_shared<const JointPmf>(pmf), std::move(order), false);
  return decompose(gs, model);
}

Decomposition decompose_truncated(const JointPmf& pmf, const Model& model, int cap) {
  require_arity(model, pmf.dimension());
  if (!pmf.full_support())
    throw Error(ErrorCode::NotFullSupport, "truncated decomposition needs full support");
  auto order = enumerate_subsets(pmf.dimension(), cap);
  auto gs = GramSystem::assemble(std::make_shared<const JointPmf>(pmf), std::move(order), false);
  return decompose(gs, model);
}

std::vector<std::size_t> select_independent_columns(const Matrix& e, double rel_tol) {
  const std::size_t rows = e.rows();
  const std::size_t cols = e.cols();
  // Work column-major so each candidate column is contiguous.
  Matrix work(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) work(j, i) = e(i, j);

  std::vector<std::size_t> kept;
  std::vector<std::size_t> pivot_rows;
  std::vector<bool> row_used(rows, false);
  for (std::size_t j = 0; j < cols && kept.size() < rows; ++j) {
    auto col = work.row(j);
    double col_max = 0.0;
    for (double v : col) col_max = std::max(col_max, std::abs(v));
    // Apply the eliminations of previously kept columns.
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const std::size_t pr = pivot_rows[k];
      const auto pcol = work.row(kept[k]);
      const double f = col[pr] / pcol[pr];
      if (f == 0.0) continue;
      kernels::axpy(-f, pcol, col);
    }
    std::size_t best = rows;
    double best_abs = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      if (!row_used[i] && std::abs(col[i]) > best_abs) {
        best_abs = std::abs(col[i]);
        best = i;
      }
    if (best == rows || !(best_abs > rel_tol * col_max)) continue;
    kept.push_back(j);
    pivot_rows.push_back(best);
    row_used[best] = true;
  }
  return kept;
}

Decomposition degenerate_decompose(const JointPmf& pmf, const Model& model) {
  require_arity(model, pmf.dimension());
  const auto sc = pmf.support();
  if (sc.kind == SupportKind::Collapsed) {
    std::ostringstream os;
    os << "support collapsed: " << sc.zero_cells << " zero cell(s) with d = " << pmf.dimension()
       << " (needs r < 2^(d-1), non-constant coordinates, and no deterministic pair)";
    throw Error(ErrorCode::CollapsedSupport, os.str());
  }
  if (sc.kind == SupportKind::Full) {
    auto dec = decompose(pmf, model);
    dec.mode = DecompositionMode::Degenerate;
    return dec;
  }

  auto shared = std::make_shared<const JointPmf>(pmf);
  auto full_order = enumerate_subsets(pmf.dimension());
  BasisEvaluator basis(pmf, full_order);

  std::vector<Mask> support;
  const auto probs = pmf.probs();
  for (std::size_t x = 0; x < probs.size(); ++x)
    if (probs[x] > 0.0) support.push_back(static_cast<Mask>(x));

  // Every marginal is positive at a support row, so E is well defined there.
  Matrix e(support.size(), full_order.size());
  std::vector<double> y(support.size());
  for (std::size_t r = 0; r < support.size(); ++r) {
    basis.eval_all(support[r], e.row(r));
    y[r] = model(support[r]);
  }

  const auto cols = select_independent_columns(e, 1e-10);
  if (cols.size() != support.size())
    throw Error(ErrorCode::CollapsedSupport,
                "configuration matrix is rank deficient on the support (rank " +
                    std::to_string(cols.size()) + " < " + std::to_string(support.size()) + ")");

  Matrix e_sq(support.size(), cols.size());
  for (std::size_t r = 0; r < support.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) e_sq(r, c) = e(r, cols[c]);
  const auto lu = LuFactor::factor(e_sq);
  const auto beta_j = lu.solve(y);

  // Residual of the square configuration system, relative to its scale.
  const auto fitted = matvec(e_sq, beta_j);
  double num = 0.0;
  double scale = 0.0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    num = std::max(num, std::abs(fitted[r] - y[r]));
    double row_scale = 0.0;
    for (std::size_t c = 0; c < cols.size(); ++c)
      row_scale += std::abs(e_sq(r, c) * beta_j[c]);
    scale = std::max({scale, std::abs(y[r]), row_scale});
  }
  const double residual = scale > 0.0 ? num / scale : num;
  check_residual(residual, "configuration system");

  std::vector<SubsetId> kept_subsets;
  for (auto c : cols) kept_subsets.push_back(full_order[c]);
  SubsetOrder j_order(pmf.dimension(), std::move(kept_subsets));

  Decomposition dec;
  dec.mode = DecompositionMode::Degenerate;
  dec.order = std::move(full_order);
  dec.beta.assign(dec.order.size(), 0.0);
  dec.identifiable.assign(dec.order.size(), false);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    dec.beta[cols[c]] = beta_j[c];
    dec.identifiable[cols[c]] = true;
  }
  dec.active = cols;
  dec.gram = GramSystem::assemble(shared, std::move(j_order), true);
  dec.residual = residual;
  return dec;
}

double component_eval(const Decomposition& dec, SubsetId a, Mask x) {
  const auto k = dec.order.index_of(a);
  if (!k) throw Error(ErrorCode::InvalidArgument, "subset " + format_subset(a) + " not in the decomposition order");
  if (!dec.identifiable[*k])
    throw Error(ErrorCode::InvalidArgument, "component " + format_subset(a) + " is not identifiable");
  if (a.empty()) return dec.beta[*k];
  const auto gk = dec.gram.order().index_of(a);
  return dec.beta[*k] * dec.gram.basis().eval(*gk, x);
}

double reconstruct(const Decomposition& dec, Mask x) {
  const auto& basis = dec.gram.basis();
  double s = 0.0;
  for (std::size_t g = 0; g < dec.active.size(); ++g) {
    const double beta = dec.beta[dec.active[g]];
    if (beta == 0.0) continue;
    s += beta * basis.eval(g, x);
  }
  return s;
}

}  // namespace mbhd
