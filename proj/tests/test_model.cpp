#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mbhd/error.hpp"
#include "mbhd/model.hpp"

using namespace mbhd;

TEST_CASE("benchmark perceptron constants and outputs") {
  const auto m = benchmark_perceptron();
  CHECK(m.arity() == 10);
  const auto& lt = std::get<LinearThreshold>(m.kind());
  CHECK(std::accumulate(lt.w.begin(), lt.w.end(), 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(lt.b == 0.12);
  CHECK(m(0) == 1.0);
  for (Mask x = 0; x < 1024; ++x) CHECK((m(x) == 1.0 || m(x) == -1.0));
}

TEST_CASE("sign(0) maps to +1") {
  const auto m = Model::linear_threshold({1.0, -1.0}, 0.0);
  CHECK(m(0b11) == 1.0);
  CHECK(m(0b10) == -1.0);
}

TEST_CASE("mushroom rule model hand evaluations") {
  const auto m = mushroom_rule_model();
  CHECK(m.arity() == 5);
  CHECK(m(0) == 1.0);          // x1 = 0, x5 = 0
  CHECK(m(0b00111) == 1.0);    // x1 = x2 = x3 = 1
  CHECK(m(0b10000) == 0.0);    // x1 = 0, x5 = 1
  CHECK(m(0b01011) == 1.0);    // x1 = x2 = 1, x3 = 0, x4 = 1
  CHECK(m(0b00011) == 0.0);    // x1 = x2 = 1, x3 = x4 = 0
}

TEST_CASE("BoolExpr grammar") {
  const auto e = BoolExpr::parse("2.5*x1 - (1-x3)*x2 + -0.5");
  CHECK(e.max_variable() == 3);
  CHECK(e.variables() == SubsetId{0b111});
  CHECK(e.evaluate(0b001) == doctest::Approx(2.0));
  CHECK(e.evaluate(0b010) == doctest::Approx(-1.5));
  CHECK(e.evaluate(0b110) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(BoolExpr::parse("x1 +"), Error);
  CHECK_THROWS_AS(BoolExpr::parse("x0"), Error);
  CHECK_THROWS_AS(BoolExpr::parse("exp(x1)"), Error);
  CHECK_THROWS_AS(Model::bool_expr("x4", 3), Error);
  CHECK(Model::bool_expr("x1*x2", 4).arity() == 4);
}

TEST_CASE("arity checks") {
  const auto m = Model::truth_table({0, 1, 1, 0});
  const std::vector<std::uint8_t> bits = {1, 0};
  CHECK(m.eval(bits) == 1.0);
  const std::vector<std::uint8_t> bad = {1, 0, 1};
  try {
    m.eval(bad);
    FAIL("expected ArityMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ArityMismatch);
  }
  CHECK_THROWS_AS(Model::truth_table({1, 2, 3}), Error);
  CHECK_THROWS_AS(require_arity(m, 3), Error);
}

TEST_CASE("truth_table_of round-trips every model kind") {
  std::mt19937_64 rng(5);
  for (int d = 1; d <= 10; ++d) {
    std::vector<Model> ms = {testutil::random_model(d, rng),
                             Model::linear_threshold(std::vector<double>(static_cast<std::size_t>(d), 0.3), -0.5),
                             Model::bool_expr("x1*(1-x" + std::to_string(d) + ")", d)};
    for (const auto& m : ms) {
      const auto t = truth_table_of(m);
      for (Mask x = 0; x < (Mask{1} << d); ++x) CHECK(t(x) == m(x));
    }
  }
}
