#include "harvest/qmat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

namespace harvest::qmat {

namespace {

std::atomic<std::size_t> g_dimension_cap{4096};

void check_dim(std::size_t rows, std::size_t cols) {
  const std::size_t cap = g_dimension_cap.load();
  if (rows > cap || cols > cap) {
    throw DimensionError("matrix dimension " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds cap " + std::to_string(cap));
  }
}

void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

}  // namespace

std::size_t dimension_cap() { return g_dimension_cap.load(); }

void set_dimension_cap(std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("dimension cap must be positive");
  g_dimension_cap.store(cap);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  check_dim(rows, cols);
  data_.assign(rows * cols, Complex{});
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  check_dim(rows, cols);
  if (data_.size() != rows * cols) {
    throw DimensionError("entry count " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  check_dim(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v, std::span<const Complex> w) {
  ComplexMatrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  check_same_shape(*this, rhs, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  check_same_shape(*this, rhs, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionError("matrix product: inner dimensions " + std::to_string(a.cols_) + " and " +
                         std::to_string(b.rows_) + " differ");
  }
  ComplexMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      const Complex* brow = &b.data_[k * b.cols_];
      Complex* crow = &c.data_[i * c.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Vector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols_ != v.size()) throw DimensionError("matrix-vector product: size mismatch");
  Vector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex s{};
    for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t cap = g_dimension_cap.load();
  // Checked before multiplying so the product cannot wrap.
  if ((a.rows() != 0 && b.rows() > cap / a.rows()) || (a.cols() != 0 && b.cols() > cap / a.cols())) {
    throw DimensionError("kron: result dimension exceeds cap " + std::to_string(cap));
  }
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

Vector kron(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != 0 && b.size() > g_dimension_cap.load() / a.size()) {
    throw DimensionError("kron: result dimension exceeds cap");
  }
  Vector out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

double phase_aligned_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionError("phase_aligned_distance: size mismatch");
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (std::abs(a[i]) > std::abs(a[pivot])) pivot = i;
  Complex phase = 1.0;
  if (!a.empty() && std::abs(a[pivot]) > 0 && std::abs(b[pivot]) > 0) {
    const Complex r = a[pivot] / b[pivot];
    phase = r / std::abs(r);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - phase * b[i]));
  return d;
}

double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b, "phase_aligned_distance");
  return phase_aligned_distance(a.entries(), b.entries());
}

}  // namespace harvest::qmat
