#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mbhd {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Principal submatrix on the given row/column indices.
  Matrix submatrix(std::span<const std::size_t> idx) const;
  /// Copies the upper triangle onto the lower one.
  void symmetrize_from_upper() noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> matvec(const Matrix& a, std::span<const double> x);

/// Lower-triangular factor L with A = L L^T.
class Cholesky {
 public:
  /// Throws IllConditioned when a pivot drops below rel_tol * max diagonal.
  static Cholesky factor(const Matrix& a, double rel_tol = 1e-10);

  std::size_t size() const noexcept { return l_.rows(); }
  const Matrix& lower() const noexcept { return l_; }

  std::vector<double> solve(std::span<const double> b) const;
  void solve_in_place(std::span<double> b) const;
  Matrix inverse() const;
  /// x^T A^{-1} x
  double inverse_quadratic_form(std::span<const double> x) const;

 private:
  Matrix l_;
  // Row-major copy of L^T so back substitution reads contiguous memory.
  Matrix lt_;
};

struct EigenEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Smallest eigenvalue of an SPD matrix by inverse power iteration on its
/// Cholesky factor, stopping on relative change of the Rayleigh quotient.
EigenEstimate smallest_eigenvalue(const Matrix& a, const Cholesky& factor, double tol = 1e-9,
                                  int max_iterations = 500);

/// All eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& a);
/// max |lambda| of a symmetric matrix.
double symmetric_spectral_norm(const Matrix& a);

}  // namespace mbhd

namespace mbhd {

/// LU factorization with partial pivoting for general square systems.
class LuFactor {
 public:
  /// Throws IllConditioned on a pivot below rel_tol * max |a_ij|.
  static LuFactor factor(const Matrix& a, double rel_tol = 1e-14);
  std::vector<double> solve(std::span<const double> b) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace mbhd
