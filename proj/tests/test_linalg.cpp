#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "mbhd/error.hpp"
#include "mbhd/linalg.hpp"
#include "mbhd/special.hpp"

using namespace mbhd;

namespace {

Matrix random_spd(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix b(n, n);
  for (auto& v : b.data()) v = g(rng);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b(i, k) * b(j, k);
      a(i, j) = s + (i == j ? 0.5 : 0.0);
    }
  return a;
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

}  // namespace

TEST_CASE("Cholesky solve and inverse match an independent LU") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 5u, 17u, 64u, 100u}) {
    const auto a = random_spd(n, rng);
    const auto f = Cholesky::factor(a);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = std::sin(1.0 + i);
    const auto x = f.solve(b);
    const Eigen::VectorXd xe = to_eigen(a).partialPivLu().solve(Eigen::Map<Eigen::VectorXd>(b.data(), n));
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xe[i]).epsilon(1e-8));
    const auto inv = f.inverse();
    const Eigen::MatrixXd inve = to_eigen(a).inverse();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(inv(i, j) == doctest::Approx(inve(i, j)).epsilon(1e-8).scale(1.0));
    CHECK(f.inverse_quadratic_form(b) == doctest::Approx(Eigen::Map<Eigen::VectorXd>(b.data(), n).dot(xe)).epsilon(1e-9));
  }
}

TEST_CASE("Cholesky rejects singular and indefinite input") {
  Matrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = a(1, 0) = 1;
  a(1, 1) = 1;
  CHECK_THROWS_AS(Cholesky::factor(a), Error);
  a(1, 1) = -1;
  CHECK_THROWS_AS(Cholesky::factor(a), Error);
}

TEST_CASE("inverse power iteration finds the smallest eigenvalue") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {3u, 20u, 80u}) {
    const auto a = random_spd(n, rng);
    const auto est = smallest_eigenvalue(a, Cholesky::factor(a));
    const auto ev = symmetric_eigenvalues(a);
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(ev.front()).epsilon(1e-7));
  }
}

TEST_CASE("LU solves a general square system") {
  Matrix a(3, 3);
  const double v[9] = {0, 2, 1, 1, 1, 0, 3, 0, 1};
  for (int i = 0; i < 9; ++i) a.data()[i] = v[i];
  const auto lu = LuFactor::factor(a);
  const auto x = lu.solve(std::vector<double>{3, 2, 4});
  const auto r = matvec(a, x);
  CHECK(r[0] == doctest::Approx(3));
  CHECK(r[1] == doctest::Approx(2));
  CHECK(r[2] == doctest::Approx(4));
}

TEST_CASE("Gauss-Hermite rule integrates normal moments") {
  for (int n : {8, 64, 256, 1024}) {
    const auto r = gauss_hermite_normal(n);
    double m0 = 0, m2 = 0, m4 = 0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      const double x = r.nodes[k], w = r.weights[k];
      m0 += w;
      m2 += w * x * x;
      m4 += w * x * x * x * x;
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-10));
  }
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  for (double p : {1e-10, 0.001, 0.02425, 0.3, 0.5, 0.8, 0.97575, 0.999999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
}
