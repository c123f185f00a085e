#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mbhd/subset.hpp"

namespace mbhd {

enum class SupportKind { Full, Degenerate, Collapsed };

struct SupportClass {
  SupportKind kind = SupportKind::Full;
  /// Number of configurations with zero probability (r).
  std::size_t zero_cells = 0;
};

std::string_view to_string(SupportKind kind) noexcept;

/// Dense probability table over {0,1}^d, indexed by configuration mask.
/// Immutable after construction.
class JointPmf {
 public:
  /// Validates, renormalizes (if the total is within 1e-6 of one), and
  /// classifies the support.
  static JointPmf from_table(std::vector<double> probs);

  int dimension() const noexcept { return d_; }
  std::size_t cells() const noexcept { return probs_.size(); }
  double operator()(Mask x) const noexcept { return probs_[x]; }
  std::span<const double> probs() const noexcept { return probs_; }
  SupportClass support() const noexcept { return support_; }
  bool full_support() const noexcept { return support_.kind == SupportKind::Full; }

  /// P(X_i = 1), 1-based.
  double marginal_one(int i) const;

 private:
  int d_ = 0;
  std::vector<double> probs_;
  SupportClass support_;
};

/// Support classification shared by the analytic and empirical constructors:
/// Degenerate needs r < 2^{d-1}, no constant coordinate, and no pair of
/// coordinates with X_j = X_i or X_j = 1 - X_i on the support.
SupportClass classify_support(int d, std::span<const double> probs);

/// Marginal law of X_A over its 2^{|A|} patterns (pattern = compress_bits(x, A)).
struct MarginalTable {
  SubsetId subset;
  std::vector<double> probs;

  double at_config(Mask x) const noexcept { return probs[compress_bits(x, subset.mask)]; }
};

MarginalTable marginal(const JointPmf& pmf, SubsetId a);

/// n binary rows with optional model outputs.
struct SampleSet {
  int d = 0;
  std::vector<Mask> rows;
  std::optional<std::vector<double>> outputs;

  std::size_t size() const noexcept { return rows.size(); }
};

JointPmf product_of_marginals(std::span<const double> q);
JointPmf empirical(const SampleSet& samples, double smoothing = 0.0);

inline constexpr int kDefaultQuadratureNodes = 256;

/// One-factor Gaussian threshold model: X_i = 1{Z_i <= 0} with
/// corr(Z_i, Z_j) = rho, integrated over the common factor by Gauss-Hermite.
JointPmf gaussian_equicorrelated(int d, double rho, int nodes = kDefaultQuadratureNodes);

/// Bivariate pmf with P(00) = P(11) = rho and P(01) = P(10) = 1/2 - rho, as
/// induced by thresholding an FGM copula at 1/2. Requires 16 rho - 4 in [-1, 1].
JointPmf fgm_threshold(double rho);

/// Same cell layout with any rho in [0, 1/2], no copula constraint.
JointPmf symmetric_binary_pair(double rho);

/// Inverse-CDF sampling with a seeded 64-bit Mersenne Twister.
SampleSet sample(const JointPmf& pmf, std::size_t n, std::uint64_t seed);

/// Reproducible uniform in [0,1) from the top 53 bits of a 64-bit draw.
template <class Engine>
double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace mbhd
