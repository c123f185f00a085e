#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mbhd/decomposition.hpp"
#include "mbhd/error.hpp"

using namespace mbhd;

TEST_CASE("FGM(0.3) with G = X1 X2") {
  const auto p = fgm_threshold(0.3);
  const auto m = Model::bool_expr("x1*x2", 2);
  const auto mu = exact_mu(p, m, enumerate_subsets(2));
  CHECK(mu.mu[0] == doctest::Approx(0.3));
  CHECK(mu.mu[1] == doctest::Approx(-0.6));
  const auto dec = decompose(p, m);
  const double expected[4] = {0.3, -0.125, -0.125, 0.06};
  for (std::size_t k = 0; k < 4; ++k) CHECK(dec.beta[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  CHECK(component_eval(dec, SubsetId{3}, 3) == doctest::Approx(0.2));
  CHECK(component_eval(dec, SubsetId{3}, 1) == doctest::Approx(-0.3));
  CHECK(component_eval(dec, SubsetId{0}, 2) == doctest::Approx(0.3));
}

TEST_CASE("constant model") {
  std::mt19937_64 rng(2);
  const auto p = testutil::random_pmf(3, rng);
  const auto dec = decompose(p, Model::tabulate(3, [](Mask) { return 2.5; }));
  CHECK(dec.beta[0] == doctest::Approx(2.5));
  for (std::size_t k = 1; k < dec.beta.size(); ++k) CHECK(std::abs(dec.beta[k]) < 1e-12);
}

TEST_CASE("reconstruction, uniqueness and dual coefficients on random instances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 8;
    const auto p = testutil::random_pmf(d, rng);
    const auto m = testutil::random_model(d, rng);
    const auto dec = decompose(p, m);
    CHECK(dec.mode == DecompositionMode::Exact);
    double scale = 0.0;
    for (Mask x = 0; x < (Mask{1} << d); ++x) scale = std::max(scale, std::abs(m(x)));
    for (Mask x = 0; x < (Mask{1} << d); ++x)
      CHECK(std::abs(reconstruct(dec, x) - m(x)) <= 1e-8 * scale);
    // Explicit inverse times mu against the factorized solve.
    const auto mu = exact_mu(p, m, dec.order);
    const auto inv = dual_coefficients(dec.gram).inverse;
    const auto alt = matvec(inv, mu.mu);
    for (std::size_t k = 0; k < alt.size(); ++k)
      CHECK(std::abs(alt[k] - dec.beta[k]) <= 1e-9 * (1.0 + std::abs(dec.beta[k])));
    CHECK(dec.beta[0] == doctest::Approx(testutil::expect(p, testutil::values(m))).epsilon(1e-10));
  }
}

TEST_CASE("independent inputs reproduce the classical decomposition") {
  std::mt19937_64 rng(43);
  for (int d = 1; d <= 6; ++d) {
    const auto p = product_of_marginals(testutil::random_marginals(d, rng));
    const auto m = testutil::random_model(d, rng);
    const auto g = testutil::values(m);
    const auto dec = decompose(p, m);
    for (auto a : dec.order) {
      const auto oracle = testutil::classical_component(p, g, a.mask);
      const auto comp = testutil::component_values(dec, a);
      for (std::size_t x = 0; x < g.size(); ++x) CHECK(std::abs(comp[x] - oracle[x]) <= 1e-9);
    }
  }
}

TEST_CASE("exclusion property") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + trial % 4;
    const Mask keep = static_cast<Mask>(rng() % ((Mask{1} << d) - 1)) + 1;
    const auto p = testutil::random_pmf(d, rng);
    const auto m = testutil::random_model_on(d, keep, rng);
    const auto dec = decompose(p, m);
    for (std::size_t k = 0; k < dec.order.size(); ++k)
      if (!dec.order[k].subset_of(SubsetId{keep})) CHECK(std::abs(dec.beta[k]) <= 1e-9);
  }
}

TEST_CASE("truncation at c = d equals exact, c < d reconstructs G_red") {
  std::mt19937_64 rng(53);
  const auto p = testutil::random_pmf(4, rng);
  const auto m = testutil::random_model(4, rng);
  const auto exact = decompose(p, m);
  const auto full = decompose_truncated(p, m, 4);
  for (std::size_t k = 0; k < exact.beta.size(); ++k) CHECK(full.beta[k] == doctest::Approx(exact.beta[k]));
  const auto t = decompose_truncated(p, m, 1);
  CHECK(t.mode == DecompositionMode::Truncated);
  CHECK(t.order.size() == 5);
}

TEST_CASE("degenerate d=2 single-zero cases against the reference formulas") {
  std::mt19937_64 rng(59);
  std::normal_distribution<double> gy;
  for (int which = 1; which <= 4; ++which) {
    for (int draw = 0; draw < 20; ++draw) {
      const auto [q1, q2] = testutil::degenerate_marginals(which, rng);
      const double y[2][2] = {{gy(rng), gy(rng)}, {gy(rng), gy(rng)}};
      const auto c = testutil::degenerate_case(which, q1, q2, y);
      const auto p = testutil::two_by_two(q1, q2, c.rho);
      REQUIRE(p.support().kind == SupportKind::Degenerate);
      const auto m = Model::tabulate(2, [&](Mask x) { return y[x & 1][(x >> 1) & 1]; });
      const auto dec = degenerate_decompose(p, m);
      CHECK(dec.mode == DecompositionMode::Degenerate);
      CHECK_FALSE(dec.identifiable[3]);
      CHECK(std::abs(dec.beta[0] - c.beta0) <= 1e-10);
      for (Mask x = 0; x < 4; ++x) {
        if (x == c.zero_cell) continue;
        CHECK(std::abs(component_eval(dec, SubsetId{1}, x) - c.g1[x & 1]) <= 1e-10);
        CHECK(std::abs(component_eval(dec, SubsetId{2}, x) - c.g2[(x >> 1) & 1]) <= 1e-10);
        CHECK(std::abs(reconstruct(dec, x) - m(x)) <= 1e-10);
      }
      CHECK_THROWS_AS(component_eval(dec, SubsetId{3}, (c.zero_cell + 1) % 4), Error);
    }
  }
}

TEST_CASE("collapsed supports are rejected") {
  const auto m = Model::bool_expr("x1+x2", 2);
  for (const auto& probs : {std::vector<double>{0.5, 0.0, 0.0, 0.5}, std::vector<double>{0.0, 0.5, 0.5, 0.0},
                            std::vector<double>{0.0, 0.0, 0.5, 0.5}}) {
    try {
      degenerate_decompose(JointPmf::from_table(probs), m);
      FAIL("expected CollapsedSupport");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CollapsedSupport);
    }
  }
  // r = 4 = 2^{d-1} zero cells at d = 3.
  std::vector<double> p3(8, 0.0);
  p3[0] = p3[3] = p3[5] = p3[6] = 0.25;
  try {
    degenerate_decompose(JointPmf::from_table(p3), Model::bool_expr("x1", 3));
    FAIL("expected CollapsedSupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CollapsedSupport);
  }
}

TEST_CASE("degenerate path on a full-support law matches decompose") {
  std::mt19937_64 rng(61);
  const auto p = testutil::random_pmf(3, rng);
  const auto m = testutil::random_model(3, rng);
  const auto a = decompose(p, m);
  const auto b = degenerate_decompose(p, m);
  for (std::size_t k = 0; k < a.beta.size(); ++k) CHECK(b.beta[k] == doctest::Approx(a.beta[k]));
}

TEST_CASE("degenerate d=3 reconstructs on the support") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = testutil::random_pmf(3, rng);
    const auto probs = base.probs();
    std::vector<double> p(probs.begin(), probs.end());
    const Mask z1 = static_cast<Mask>(rng() % 8);
    const Mask z2 = static_cast<Mask>(rng() % 8);
    p[z1] = 0.0;
    p[z2] = 0.0;
    double s = 0;
    for (double v : p) s += v;
    for (double& v : p) v /= s;
    const auto pmf = JointPmf::from_table(p);
    const auto m = testutil::random_model(3, rng);
    if (pmf.support().kind == SupportKind::Collapsed) {
      CHECK_THROWS_AS(degenerate_decompose(pmf, m), Error);
      continue;
    }
    const auto dec = degenerate_decompose(pmf, m);
    std::size_t ident = 0;
    for (bool b : dec.identifiable) ident += b;
    CHECK(ident == 8 - pmf.support().zero_cells);
    for (Mask x = 0; x < 8; ++x)
      if (pmf(x) > 0) CHECK(std::abs(reconstruct(dec, x) - m(x)) <= 1e-8);
  }
}

TEST_CASE("column selection keeps the first independent columns") {
  Matrix e(3, 4);
  const double v[12] = {1, 2, 2, 0, 1, 0, 0, 1, 1, 1, 1, 1};
  for (int i = 0; i < 12; ++i) e.data()[i] = v[i];
  const auto j = select_independent_columns(e);
  REQUIRE(j.size() == 3);
  CHECK(j[0] == 0);
  CHECK(j[1] == 1);
  CHECK(j[2] == 3);
}
