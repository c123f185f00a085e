#include "mbhd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "mbhd/error.hpp"
#include "mbhd/kernels.hpp"

namespace mbhd {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::submatrix(std::span<const std::size_t> idx) const {
  Matrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(idx[i], idx[j]);
  return out;
}

void Matrix::symmetrize_from_upper() noexcept {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < i; ++j) (*this)(i, j) = (*this)(j, i);
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = kernels::dot(a.row(i), x);
  return y;
}

Cholesky Cholesky::factor(const Matrix& a, double rel_tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::InvalidArgument, "Cholesky needs a square matrix");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double floor = rel_tol * max_diag;

  Cholesky c;
  c.l_ = Matrix(n, n);
  Matrix& l = c.l_;
  for (std::size_t j = 0; j < n; ++j) {
    auto lj = l.row(j).first(j);
    const double pivot = a(j, j) - kernels::dot(lj, lj);
    if (!(pivot > floor)) {
      std::ostringstream os;
      os << "Cholesky pivot " << pivot << " at index " << j << " below tolerance " << floor;
      throw Error(ErrorCode::IllConditioned, os.str());
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double s = a(i, j) - kernels::dot(l.row(i).first(j), lj);
      l(i, j) = s / ljj;
    }
  }
  c.lt_ = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) c.lt_(j, i) = l(i, j);
  return c;
}

void Cholesky::solve_in_place(std::span<double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw Error(ErrorCode::InvalidArgument, "right-hand side size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    b[i] = (b[i] - kernels::dot(l_.row(i).first(i), b.first(i))) / l_(i, i);
  for (std::size_t ii = n; ii-- > 0;) {
    const auto tail = lt_.row(ii).subspan(ii + 1);
    b[ii] = (b[ii] - kernels::dot(tail, b.subspan(ii + 1))) / lt_(ii, ii);
  }
}

std::vector<double> Cholesky::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

Matrix Cholesky::inverse() const {
  const std::size_t n = size();
  Matrix inv(n, n);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    solve_in_place(col);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  // Symmetric by construction; average away rounding asymmetry.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = s;
      inv(j, i) = s;
    }
  return inv;
}

double Cholesky::inverse_quadratic_form(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i)
    y[i] = (y[i] - kernels::dot(l_.row(i).first(i), std::span<const double>(y).first(i))) / l_(i, i);
  return kernels::dot(y, y);
}

EigenEstimate smallest_eigenvalue(const Matrix& a, const Cholesky& factor, double tol,
                                  int max_iterations) {
  const std::size_t n = a.rows();
  EigenEstimate est;
  if (n == 0) return est;
  // Deterministic start vector with no special alignment to structured eigenvectors.
  std::vector<double> v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;
  for (std::size_t i = 0; i < n; ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    v[i] = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  auto normalize = [](std::vector<double>& w) {
    const double nrm = std::sqrt(kernels::dot(w, w));
    for (double& x : w) x /= nrm;
  };
  normalize(v);
  double previous = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    factor.solve_in_place(v);
    normalize(v);
    const auto av = matvec(a, v);
    const double rayleigh = kernels::dot(v, av);
    est.value = rayleigh;
    est.iterations = it;
    if (it > 1 && std::abs(rayleigh - previous) <= tol * std::abs(rayleigh)) {
      est.converged = true;
      break;
    }
    previous = rayleigh;
  }
  return est;
}

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double symmetric_spectral_norm(const Matrix& a) {
  const auto ev = symmetric_eigenvalues(a);
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace mbhd

namespace mbhd {

LuFactor LuFactor::factor(const Matrix& a, double rel_tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::InvalidArgument, "LU needs a square matrix");
  LuFactor f;
  f.lu_ = a;
  f.perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm_[i] = i;
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  Matrix& m = f.lu_;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (!(std::abs(m(p, k)) > rel_tol * scale))
      throw Error(ErrorCode::IllConditioned, "singular matrix in LU factorization");
    if (p != k) {
      std::swap_ranges(m.row(k).begin(), m.row(k).end(), m.row(p).begin());
      std::swap(f.perm_[k], f.perm_[p]);
    }
    const double pivot = m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = m(i, k) / pivot;
      m(i, k) = factor;
      if (factor != 0.0)
        kernels::axpy(-factor, m.row(k).subspan(k + 1), m.row(i).subspan(k + 1));
    }
  }
  return f;
}

std::vector<double> LuFactor::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw Error(ErrorCode::InvalidArgument, "right-hand side size mismatch");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i)
    x[i] -= kernels::dot(lu_.row(i).first(i), std::span<const double>(x).first(i));
  for (std::size_t i = n; i-- > 0;) {
    x[i] -= kernels::dot(lu_.row(i).subspan(i + 1), std::span<const double>(x).subspan(i + 1));
    x[i] /= lu_(i, i);
  }
  return x;
}

}  // namespace mbhd
