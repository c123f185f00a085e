#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mbhd/error.hpp"
#include "mbhd/pmf.hpp"

using namespace mbhd;

namespace {
ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}
}  // namespace

TEST_CASE("from_table validates and classifies") {
  CHECK(code_of([] { JointPmf::from_table({0.5, 0.6, -0.1, 0.0}); }) == ErrorCode::NegativeProbability);
  CHECK(code_of([] { JointPmf::from_table({0.5, 0.5, 0.5, 0.5}); }) == ErrorCode::NotNormalized);
  CHECK(JointPmf::from_table({0.25, 0.25, 0.25, 0.25}).full_support());
  const auto deg = JointPmf::from_table({0.0, 0.4, 0.3, 0.3});
  CHECK(deg.support().kind == SupportKind::Degenerate);
  CHECK(deg.support().zero_cells == 1);
  // X2 = X1 on the support.
  CHECK(JointPmf::from_table({0.5, 0.0, 0.0, 0.5}).support().kind == SupportKind::Collapsed);
  // X2 = 1 - X1.
  CHECK(JointPmf::from_table({0.0, 0.5, 0.5, 0.0}).support().kind == SupportKind::Collapsed);
  // A constant coordinate.
  CHECK(JointPmf::from_table({0.5, 0.5, 0.0, 0.0}).support().kind == SupportKind::Collapsed);
}

TEST_CASE("marginals sum over agreeing configurations") {
  std::mt19937_64 rng(3);
  const auto p = testutil::random_pmf(4, rng);
  const auto m = marginal(p, SubsetId{0b0101});
  REQUIRE(m.probs.size() == 4);
  double total = 0.0;
  for (std::size_t z = 0; z < 4; ++z) {
    double s = 0.0;
    for (Mask x = 0; x < 16; ++x)
      if (compress_bits(x, 0b0101) == z) s += p(x);
    CHECK(m.probs[z] == doctest::Approx(s).epsilon(1e-14));
    total += m.probs[z];
  }
  CHECK(total == doctest::Approx(1.0));
  const auto e = marginal(p, SubsetId{0});
  REQUIRE(e.probs.size() == 1);
  CHECK(e.probs[0] == doctest::Approx(1.0));
}

TEST_CASE("product of marginals") {
  const auto p = product_of_marginals(std::vector<double>{0.2, 0.7});
  CHECK(p(0) == doctest::Approx(0.8 * 0.3));
  CHECK(p(1) == doctest::Approx(0.2 * 0.3));
  CHECK(p(3) == doctest::Approx(0.2 * 0.7));
  CHECK(code_of([] { product_of_marginals(std::vector<double>{0.0, 0.5}); }) == ErrorCode::DegenerateMarginal);
}

TEST_CASE("equicorrelated Gaussian threshold matches the orthant formula") {
  // P(Z1 <= 0, Z2 <= 0) = 1/4 + asin(rho) / (2 pi) for a standard bivariate normal.
  for (double rho : {0.0, 0.1, 0.5, 0.9}) {
    const auto p = gaussian_equicorrelated(2, rho);
    const double both = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
    CHECK(p(3) == doctest::Approx(both).epsilon(1e-9));
    CHECK(p(0) == doctest::Approx(both).epsilon(1e-9));
    CHECK(p(1) == doctest::Approx(0.5 - both).epsilon(1e-9));
    CHECK(p.marginal_one(1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(code_of([] { gaussian_equicorrelated(3, 1.0); }) == ErrorCode::InvalidCorrelation);
  CHECK(code_of([] { gaussian_equicorrelated(3, -0.1); }) == ErrorCode::InvalidCorrelation);
}

TEST_CASE("FGM threshold range") {
  CHECK(fgm_threshold(0.25)(0) == doctest::Approx(0.25));
  CHECK_NOTHROW(fgm_threshold(3.0 / 16.0));
  CHECK_NOTHROW(fgm_threshold(5.0 / 16.0));
  CHECK(code_of([] { fgm_threshold(0.1); }) == ErrorCode::OutOfFGMRange);
  CHECK(symmetric_binary_pair(0.1)(1) == doctest::Approx(0.4));
}

TEST_CASE("sampling is deterministic and consistent") {
  const auto p = JointPmf::from_table({0.1, 0.2, 0.3, 0.4});
  const auto a = sample(p, 20000, 99);
  const auto b = sample(p, 20000, 99);
  CHECK(a.rows == b.rows);
  const auto e = empirical(a);
  for (Mask x = 0; x < 4; ++x) CHECK(std::abs(e(x) - p(x)) < 0.015);
  CHECK(code_of([&] { sample(p, 0, 1); }) == ErrorCode::InsufficientSamples);
}

TEST_CASE("empirical pmf keeps zero counts and supports smoothing") {
  SampleSet s;
  s.d = 2;
  s.rows = {1, 2, 3, 3};
  const auto e = empirical(s);
  CHECK(e(0) == 0.0);
  CHECK(e.support().kind == SupportKind::Degenerate);
  const auto sm = empirical(s, 1.0);
  CHECK(sm(0) == doctest::Approx(1.0 / 8.0));
  CHECK(sm.full_support());
}
