#include "mbhd/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "mbhd/error.hpp"
#include "mbhd/special.hpp"

namespace mbhd {

std::string_view to_string(SupportKind kind) noexcept {
  switch (kind) {
    case SupportKind::Full: return "full";
    case SupportKind::Degenerate: return "degenerate";
    case SupportKind::Collapsed: return "collapsed";
  }
  return "unknown";
}

namespace {

int dimension_of(std::size_t cells) {
  if (cells < 2 || (cells & (cells - 1)) != 0)
    throw Error(ErrorCode::InvalidArgument, "table length must be a power of two >= 2");
  const int d = std::countr_zero(cells);
  if (d > kMaxDimension) throw Error(ErrorCode::DimensionTooLarge, "table too large");
  return d;
}

}  // namespace

SupportClass classify_support(int d, std::span<const double> probs) {
  SupportClass sc;
  sc.zero_cells = static_cast<std::size_t>(std::count(probs.begin(), probs.end(), 0.0));
  if (sc.zero_cells == 0) return sc;
  sc.kind = SupportKind::Degenerate;
  const std::size_t half = probs.size() / 2;
  if (sc.zero_cells >= half) {
    sc.kind = SupportKind::Collapsed;
    return sc;
  }
  // Marginal and pairwise tables over the support.
  std::vector<double> ones(static_cast<std::size_t>(d), 0.0);
  std::vector<double> pair(static_cast<std::size_t>(d * d * 4), 0.0);
  for (std::size_t x = 0; x < probs.size(); ++x) {
    const double p = probs[x];
    if (p == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      const unsigned xi = (x >> i) & 1u;
      if (xi) ones[static_cast<std::size_t>(i)] += p;
      for (int j = i + 1; j < d; ++j) {
        const unsigned xj = (x >> j) & 1u;
        pair[static_cast<std::size_t>((i * d + j) * 4 + xi * 2 + xj)] += p;
      }
    }
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (int i = 0; i < d; ++i) {
    const double q = ones[static_cast<std::size_t>(i)];
    if (q == 0.0 || q == total) {
      sc.kind = SupportKind::Collapsed;
      return sc;
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double* t = &pair[static_cast<std::size_t>((i * d + j) * 4)];
      const bool equal = t[1] == 0.0 && t[2] == 0.0;
      const bool complement = t[0] == 0.0 && t[3] == 0.0;
      if (equal || complement) {
        sc.kind = SupportKind::Collapsed;
        return sc;
      }
    }
  return sc;
}

JointPmf JointPmf::from_table(std::vector<double> probs) {
  const int d = dimension_of(probs.size());
  double total = 0.0;
  for (std::size_t x = 0; x < probs.size(); ++x) {
    const double p = probs[x];
    if (!std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite probability");
    if (p < 0.0) {
      std::ostringstream os;
      os << "negative probability " << p << " at configuration " << x;
      throw Error(ErrorCode::NegativeProbability, os.str());
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "probabilities sum to " << total;
    throw Error(ErrorCode::NotNormalized, os.str());
  }
  for (double& p : probs) p /= total;
  JointPmf pmf;
  pmf.d_ = d;
  pmf.support_ = classify_support(d, probs);
  pmf.probs_ = std::move(probs);
  return pmf;
}

double JointPmf::marginal_one(int i) const {
  if (i < 1 || i > d_) throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
  double q = 0.0;
  for (std::size_t x = 0; x < probs_.size(); ++x)
    if ((x >> (i - 1)) & 1u) q += probs_[x];
  return q;
}

MarginalTable marginal(const JointPmf& pmf, SubsetId a) {
  if (a.mask >> pmf.dimension())
    throw Error(ErrorCode::InvalidArgument, "subset outside the pmf dimension");
  MarginalTable t;
  t.subset = a;
  t.probs.assign(std::size_t{1} << a.size(), 0.0);
  const auto probs = pmf.probs();
  for (std::size_t x = 0; x < probs.size(); ++x)
    t.probs[compress_bits(static_cast<Mask>(x), a.mask)] += probs[x];
  return t;
}

JointPmf product_of_marginals(std::span<const double> q) {
  const auto d = q.size();
  if (d < 1 || d > static_cast<std::size_t>(kMaxDimension))
    throw Error(ErrorCode::DimensionTooLarge, "dimension must be in [1, 30]");
  for (double qi : q)
    if (!(qi > 0.0 && qi < 1.0))
      throw Error(ErrorCode::DegenerateMarginal, "marginal parameters must lie in (0,1)");
  std::vector<double> probs(std::size_t{1} << d);
  for (std::size_t x = 0; x < probs.size(); ++x) {
    double p = 1.0;
    for (std::size_t i = 0; i < d; ++i) p *= ((x >> i) & 1u) ? q[i] : 1.0 - q[i];
    probs[x] = p;
  }
  return JointPmf::from_table(std::move(probs));
}

JointPmf empirical(const SampleSet& samples, double smoothing) {
  if (samples.size() == 0) throw Error(ErrorCode::InsufficientSamples, "empirical pmf needs n >= 1");
  if (smoothing < 0.0) throw Error(ErrorCode::InvalidArgument, "smoothing must be >= 0");
  if (samples.d < 1 || samples.d > 24)
    throw Error(ErrorCode::DimensionTooLarge, "dense empirical pmf limited to d <= 24");
  const std::size_t cells = std::size_t{1} << samples.d;
  std::vector<double> counts(cells, 0.0);
  for (Mask x : samples.rows) counts[x] += 1.0;
  const double denom = static_cast<double>(samples.size()) + smoothing * static_cast<double>(cells);
  for (double& c : counts) c = (c + smoothing) / denom;
  return JointPmf::from_table(std::move(counts));
}

JointPmf gaussian_equicorrelated(int d, double rho, int nodes) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw Error(ErrorCode::InvalidCorrelation, "equicorrelation must lie in [0, 1)");
  if (d < 1 || d > 24) throw Error(ErrorCode::DimensionTooLarge, "dimension must be in [1, 24]");
  // Conditional on the common factor W = w the coordinates are independent
  // with P(X_i = 1 | w) = Phi(-sqrt(rho) w / sqrt(1 - rho)); the cell value
  // depends only on the number of ones.
  const auto rule = gauss_hermite_normal(nodes);
  const double slope = std::sqrt(rho / (1.0 - rho));
  std::vector<double> by_count(static_cast<std::size_t>(d + 1), 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double p = normal_cdf(-slope * rule.nodes[k]);
    const double q = normal_cdf(slope * rule.nodes[k]);
    for (int ones = 0; ones <= d; ++ones)
      by_count[static_cast<std::size_t>(ones)] +=
          rule.weights[k] * std::pow(p, ones) * std::pow(q, d - ones);
  }
  std::vector<double> probs(std::size_t{1} << d);
  for (std::size_t x = 0; x < probs.size(); ++x)
    probs[x] = by_count[static_cast<std::size_t>(std::popcount(x))];
  return JointPmf::from_table(std::move(probs));
}

JointPmf symmetric_binary_pair(double rho) {
  if (!(rho >= 0.0 && rho <= 0.5))
    throw Error(ErrorCode::InvalidArgument, "cell probability must lie in [0, 1/2]");
  // Mask order: 00, 10 (x1=1), 01 (x2=1), 11.
  return JointPmf::from_table({rho, 0.5 - rho, 0.5 - rho, rho});
}

JointPmf fgm_threshold(double rho) {
  const double theta = 16.0 * rho - 4.0;
  if (!(theta >= -1.0 && theta <= 1.0)) {
    std::ostringstream os;
    os << "FGM parameter 16*rho - 4 = " << theta << " outside [-1, 1]";
    throw Error(ErrorCode::OutOfFGMRange, os.str());
  }
  return symmetric_binary_pair(rho);
}

SampleSet sample(const JointPmf& pmf, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InsufficientSamples, "sample size must be >= 1");
  const auto probs = pmf.probs();
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  // Last cell with positive mass absorbs rounding in the tail of the CDF.
  std::size_t last = probs.size() - 1;
  while (last > 0 && probs[last] == 0.0) --last;
  std::mt19937_64 eng(seed);
  SampleSet s;
  s.d = pmf.dimension();
  s.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform01(eng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx > last) idx = last;
    // upper_bound never lands on a zero-mass cell: its CDF equals the previous one.
    s.rows[i] = static_cast<Mask>(idx);
  }
  return s;
}

}  // namespace mbhd
