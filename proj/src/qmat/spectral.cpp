#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "harvest/qmat.hpp"

namespace harvest::qmat {

namespace {

using RowMajorXcd = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorXcd> as_eigen(const ComplexMatrix& m) {
  return Eigen::Map<const RowMajorXcd>(m.entries().data(), static_cast<Eigen::Index>(m.rows()),
                                       static_cast<Eigen::Index>(m.cols()));
}

[[noreturn]] void report_failure(const ComplexMatrix& m, const char* reason) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(as_eigen(m));
  const auto& s = svd.singularValues();
  std::ostringstream os;
  os << "Hermitian eigensolve failed (" << reason << ") for " << m.rows() << "x" << m.cols()
     << " matrix; max|m_ij| = " << m.max_abs();
  if (s.size() > 0) os << ", singular values in [" << s(s.size() - 1) << ", " << s(0) << "]";
  throw NumericalError(os.str());
}

}  // namespace

HermitianOp::HermitianOp(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square()) throw std::invalid_argument("HermitianOp: matrix is not square");
  if (!matrix_.all_finite()) throw std::invalid_argument("HermitianOp: non-finite entries");
  const double dev = (matrix_ - matrix_.adjoint()).max_abs();
  if (dev > kHermiticityTolerance) {
    std::ostringstream os;
    os << "HermitianOp: ||M - M^dagger||_max = " << dev << " exceeds " << kHermiticityTolerance;
    throw std::invalid_argument(os.str());
  }
}

HermitianOp HermitianOp::zero(std::size_t dim) { return HermitianOp(ComplexMatrix::zeros(dim, dim)); }

HermitianOp HermitianOp::identity(std::size_t dim) { return HermitianOp(ComplexMatrix::identity(dim)); }

HermitianOp HermitianOp::diagonal(std::span<const double> diag) {
  return HermitianOp(ComplexMatrix::diagonal(diag));
}

EigenDecomposition herm_eig(const HermitianOp& h) {
  const ComplexMatrix& m = h.matrix();
  // SelfAdjointEigenSolver reads the lower triangle; eigenvalues come out ascending.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(as_eigen(m), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) report_failure(m, "no convergence");

  EigenDecomposition out;
  const auto n = static_cast<std::size_t>(m.rows());
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i)
      out.vectors(i, k) = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  if (!out.vectors.all_finite()) report_failure(m, "non-finite eigenvectors");
  return out;
}

std::vector<double> eigvalsh(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("eigvalsh: matrix is not square");
  if (!m.all_finite()) throw NumericalError("eigvalsh: non-finite input");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(as_eigen(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) report_failure(m, "no convergence");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ComplexMatrix unitary_from_generator(const HermitianOp& h) {
  const auto [values, v] = herm_eig(h);
  const std::size_t n = values.size();
  // V diag(e^{-i lambda}) V^dagger
  ComplexMatrix scaled = v;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex phase = std::polar(1.0, -values[k]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= phase;
  }
  return scaled * v.adjoint();
}

}  // namespace harvest::qmat
