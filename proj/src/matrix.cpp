#include "growthlab/matrix.hpp"

#include <cmath>
#include <sstream>

#include "growthlab/error.hpp"

namespace growthlab {

Matrix::Matrix(int n, double fill) : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "matrix size must be nonnegative");
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.n_; ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::operator+(const Matrix& other) const {
  if (other.n_ != n_) fail(ErrorCode::InvalidArgument, "matrix size mismatch");
  Matrix r = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] += other.a_[k];
  return r;
}

Matrix Matrix::transposed() const {
  Matrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::symmetrized() const {
  Matrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
  return r;
}

bool Matrix::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

double Matrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double Matrix::quadratic_form(std::span<const double> q) const {
  if (static_cast<int>(q.size()) != n_) fail(ErrorCode::InvalidArgument, "vector size mismatch");
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += q[i] * (*this)(i, j) * q[j];
  return s;
}

std::vector<double> Matrix::apply(std::span<const double> q) const {
  if (static_cast<int>(q.size()) != n_) fail(ErrorCode::InvalidArgument, "vector size mismatch");
  std::vector<double> r(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[i] += (*this)(i, j) * q[j];
  return r;
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < m.size(); ++i) {
    if (i) os << "; ";
    for (int j = 0; j < m.size(); ++j) os << (j ? " " : "") << m(i, j);
  }
  os << ']';
  return os.str();
}

}  // namespace growthlab
