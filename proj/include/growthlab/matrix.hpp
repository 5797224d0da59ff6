#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace growthlab {

/// Small dense square matrix, row-major. Used for Hessians X and the
/// coefficient matrices of the limit operators (d is 1..3 in practice).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n, double fill = 0.0);

  static Matrix identity(int n);
  static Matrix diagonal(std::initializer_list<double> diag);
  static Matrix diagonal(std::span<const double> diag);

  int size() const noexcept { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

  Matrix operator+(const Matrix& other) const;
  Matrix transposed() const;
  Matrix symmetrized() const;
  bool is_symmetric(double tol = 0.0) const;

  double trace() const;
  /// q^T M q
  double quadratic_form(std::span<const double> q) const;
  std::vector<double> apply(std::span<const double> q) const;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

std::string to_string(const Matrix& m);

}  // namespace growthlab
