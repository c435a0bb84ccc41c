#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace harvest::qmat {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

// Raised when a dimension exceeds the configured cap or operands disagree.
class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised when an eigensolve fails or produces non-finite output.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest square dimension any operation will produce (default 4096).
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

//------------------------------------------------------------------------------
// Dense complex matrix, row-major.
//------------------------------------------------------------------------------
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);
  // |v><w|
  static ComplexMatrix outer(std::span<const Complex> v, std::span<const Complex> w);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  // max_ij |m_ij|
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend Vector operator*(const ComplexMatrix& a, std::span<const Complex> v);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// [a, b] = ab - ba
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Vector kron(std::span<const Complex> a, std::span<const Complex> b);

//------------------------------------------------------------------------------
// Hermitian operator. Construction checks ||M - M^dagger||_max <= 1e-12.
//------------------------------------------------------------------------------
class HermitianOp {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  explicit HermitianOp(ComplexMatrix m);

  static HermitianOp zero(std::size_t dim);
  static HermitianOp identity(std::size_t dim);
  static HermitianOp diagonal(std::span<const double> diag);

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

// Hermitian eigensolve (tridiagonalization + implicit QR).
EigenDecomposition herm_eig(const HermitianOp& h);
// Eigenvalues only; the input must be Hermitian to working precision.
std::vector<double> eigvalsh(const ComplexMatrix& m);

// exp(-iH) through the spectral decomposition.
ComplexMatrix unitary_from_generator(const HermitianOp& h);

//------------------------------------------------------------------------------
// Density matrix over a tensor product of subsystems.
//------------------------------------------------------------------------------
class DensityMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kPsdTolerance = 1e-10;

  DensityMatrix(ComplexMatrix m, std::vector<std::size_t> subsystem_dims);

  static DensityMatrix from_pure(std::span<const Complex> psi, std::vector<std::size_t> subsystem_dims);
  static DensityMatrix maximally_mixed(std::vector<std::size_t> subsystem_dims);

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<std::size_t>& subsystem_dims() const { return dims_; }

 private:
  ComplexMatrix matrix_;
  std::vector<std::size_t> dims_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
// U rho U^dagger, subsystem layout unchanged.
DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& unitary);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep);

// Transpose on one tensor factor. The result is Hermitian but in general not PSD.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const std::size_t> subsystem_dims,
                                std::size_t subsystem);
ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem);

// Sum of |negative eigenvalues| of the partial transpose.
double negativity(const DensityMatrix& rho, std::size_t subsystem);

// |<psi|rho|psi>| for a pure target state.
double fidelity(const DensityMatrix& rho, std::span<const Complex> psi);

// max_ij |a_ij - e^{i phi} b_ij| with phi aligning the largest-magnitude entry of a.
double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double phase_aligned_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace harvest::qmat
