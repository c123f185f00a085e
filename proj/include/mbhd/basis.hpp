#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "mbhd/linalg.hpp"
#include "mbhd/pmf.hpp"
#include "mbhd/subset.hpp"

namespace mbhd {

/// Evaluates the oblique family e_A(x_A) = (-1)^{sum_{j in A} x_j} / P_A(x_A)
/// for every A in an order, from precomputed marginal tables.
class BasisEvaluator {
 public:
  BasisEvaluator(const JointPmf& pmf, SubsetOrder order);
  /// Marginals estimated by pattern frequencies in the sample.
  static BasisEvaluator from_samples(const SampleSet& samples, SubsetOrder order);

  const SubsetOrder& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  int dimension() const noexcept { return order_.dimension(); }

  double marginal_prob(std::size_t k, Mask x) const noexcept {
    return marginals_[k][compress_bits(x, order_[k].mask)];
  }
  /// Throws ZeroMarginal when P_A(x_A) = 0.
  double eval(std::size_t k, Mask x) const;
  /// All basis values at x; throws ZeroMarginal.
  void eval_all(Mask x, std::span<double> out) const;
  std::vector<double> eval_all(Mask x) const;
  /// True when every marginal in the order is positive at x.
  bool defined_at(Mask x) const noexcept;

  std::span<const double> marginal_table(std::size_t k) const noexcept { return marginals_[k]; }

 private:
  BasisEvaluator() = default;
  SubsetOrder order_;
  std::vector<std::vector<double>> marginals_;
};

/// e_A(x_A) computed directly from the pmf.
double eval_basis(const JointPmf& pmf, SubsetId a, Mask x);

/// Gram matrix Gamma_{A,B} = E[e_A e_B] with its Cholesky factor.
/// Immutable; copies share the underlying state.
class GramSystem {
 public:
  const SubsetOrder& order() const noexcept { return basis().order(); }
  std::size_t size() const noexcept { return state_->gamma.rows(); }
  const Matrix& gamma() const noexcept { return state_->gamma; }
  const Cholesky& factor() const noexcept { return state_->factor; }
  const BasisEvaluator& basis() const noexcept { return state_->basis; }
  /// Source distribution; null for a sample-averaged Gram matrix.
  const std::shared_ptr<const JointPmf>& pmf() const noexcept { return state_->pmf; }
  /// True when Gamma is a sample average with empirical marginals.
  bool empirical() const noexcept { return state_->empirical; }

  /// Smallest eigenvalue by inverse power iteration (computed on first use).
  double lambda_min() const;

  std::vector<double> solve(std::span<const double> rhs) const { return factor().solve(rhs); }

  /// Exact principal submatrix on the subsets of cardinality <= cap.
  GramSystem truncated(int cap) const;

  // Factories (see gram_matrix for the public contract).
  static GramSystem assemble(std::shared_ptr<const JointPmf> pmf, SubsetOrder order,
                             bool allow_zero_cells);
  static GramSystem from_samples(const SampleSet& samples, SubsetOrder order);
  static GramSystem from_parts(BasisEvaluator basis, Matrix gamma,
                               std::shared_ptr<const JointPmf> pmf, bool empirical);

 private:
  struct State {
    State(BasisEvaluator b, Matrix g, Cholesky f, std::shared_ptr<const JointPmf> p, bool emp)
        : basis(std::move(b)), gamma(std::move(g)), factor(std::move(f)), pmf(std::move(p)),
          empirical(emp) {}
    BasisEvaluator basis;
    Matrix gamma;
    Cholesky factor;
    std::shared_ptr<const JointPmf> pmf;
    bool empirical = false;
    mutable std::once_flag lambda_once;
    mutable double lambda = 0.0;
  };
  std::shared_ptr<const State> state_;
};

/// Dense Gram matrix by exact summation over {0,1}^d. Requires full support.
GramSystem gram_matrix(const JointPmf& pmf, const SubsetOrder& order);

/// Rows of Gamma^{-1}: e*_A = sum_B (Gamma^{-1})_{A,B} e_B.
struct DualCoefficients {
  SubsetOrder order;
  Matrix inverse;
};

DualCoefficients dual_coefficients(const GramSystem& gs);

/// Values of e*_A over all 2^d configurations (zero-probability cells left at 0).
std::vector<double> dual_values(const DualCoefficients& dual, const BasisEvaluator& basis,
                                std::size_t k);
/// Values of e_A over all 2^d configurations (zero-probability cells left at 0).
std::vector<double> basis_values(const BasisEvaluator& basis, std::size_t k,
                                 const JointPmf& pmf);

/// <u, v> = E[u(X) v(X)] for functions tabulated over configurations.
double inner_product(std::span<const double> u, std::span<const double> v, const JointPmf& pmf);
/// arccos of the clamped cosine between u and v under the pmf.
double angle(std::span<const double> u, std::span<const double> v, const JointPmf& pmf);

/// Upper bound on the configurations held in memory per assembly block.
inline constexpr std::size_t kAssemblyBlock = 64;

}  // namespace mbhd
