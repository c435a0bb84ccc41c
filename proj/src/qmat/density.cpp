#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "harvest/qmat.hpp"

namespace harvest::qmat {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// stride[k] = product of dims after k (first factor most significant, matching kron).
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) stride[k - 1] = stride[k] * dims[k];
  return stride;
}

// Flat offsets of every multi-index over the chosen subsystems.
std::vector<std::size_t> offsets_over(std::span<const std::size_t> dims, std::span<const std::size_t> stride,
                                      std::span<const std::size_t> which) {
  std::vector<std::size_t> out{0};
  for (std::size_t k : which) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[k]);
    for (std::size_t base : out)
      for (std::size_t d = 0; d < dims[k]; ++d) next.push_back(base + d * stride[k]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m, std::vector<std::size_t> subsystem_dims)
    : matrix_(std::move(m)), dims_(std::move(subsystem_dims)) {
  if (!matrix_.is_square()) throw std::invalid_argument("DensityMatrix: matrix is not square");
  if (dims_.empty() || std::find(dims_.begin(), dims_.end(), 0u) != dims_.end() ||
      product(dims_) != matrix_.rows()) {
    throw std::invalid_argument("DensityMatrix: subsystem dimensions do not multiply to " +
                                std::to_string(matrix_.rows()));
  }
  if (!matrix_.all_finite()) throw std::invalid_argument("DensityMatrix: non-finite entries");

  std::ostringstream os;
  const double herm = (matrix_ - matrix_.adjoint()).max_abs();
  if (herm > kHermiticityTolerance) {
    os << "DensityMatrix: not Hermitian (deviation " << herm << ")";
    throw std::invalid_argument(os.str());
  }
  const double tr = std::abs(matrix_.trace() - 1.0);
  if (tr > kTraceTolerance) {
    os << "DensityMatrix: trace differs from 1 by " << tr;
    throw std::invalid_argument(os.str());
  }
  const double min_ev = eigvalsh(matrix_).front();
  if (min_ev < -kPsdTolerance) {
    os << "DensityMatrix: minimum eigenvalue " << min_ev << " below " << -kPsdTolerance;
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix DensityMatrix::from_pure(std::span<const Complex> psi, std::vector<std::size_t> subsystem_dims) {
  double norm2 = 0.0;
  for (const auto& z : psi) norm2 += std::norm(z);
  if (norm2 <= 0.0) throw std::invalid_argument("DensityMatrix::from_pure: zero vector");
  const double scale = 1.0 / std::sqrt(norm2);
  Vector unit(psi.begin(), psi.end());
  for (auto& z : unit) z *= scale;
  return DensityMatrix(ComplexMatrix::outer(unit, unit), std::move(subsystem_dims));
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<std::size_t> subsystem_dims) {
  const std::size_t n = product(subsystem_dims);
  return DensityMatrix(ComplexMatrix::identity(n) * Complex(1.0 / static_cast<double>(n)),
                       std::move(subsystem_dims));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims = a.subsystem_dims();
  dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(dims));
}

DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& unitary) {
  ComplexMatrix out = unitary * rho.matrix() * unitary.adjoint();
  // Re-symmetrize: rounding in the two products leaves ~1e-16 anti-Hermitian residue.
  out = (out + out.adjoint()) * Complex(0.5);
  return DensityMatrix(std::move(out), rho.subsystem_dims());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto& dims = rho.subsystem_dims();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) throw std::invalid_argument("partial_trace: subsystem index out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate subsystem index");
    kept[k] = true;
  }
  std::vector<std::size_t> keep_idx, trace_idx, out_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (kept[k]) {
      keep_idx.push_back(k);
      out_dims.push_back(dims[k]);
    } else {
      trace_idx.push_back(k);
    }
  }
  const auto stride = strides_of(dims);
  const auto keep_off = offsets_over(dims, stride, keep_idx);
  const auto trace_off = offsets_over(dims, stride, trace_idx);

  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(keep_off.size(), keep_off.size());
  for (std::size_t r = 0; r < keep_off.size(); ++r)
    for (std::size_t c = 0; c < keep_off.size(); ++c) {
      Complex s{};
      for (std::size_t t : trace_off) s += m(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = s;
    }
  return DensityMatrix(std::move(out), std::move(out_dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const std::size_t> dims, std::size_t subsystem) {
  if (subsystem >= dims.size()) throw std::invalid_argument("partial_transpose: subsystem index out of range");
  if (!m.is_square() || product(dims) != m.rows()) {
    throw std::invalid_argument("partial_transpose: dimensions do not match matrix");
  }
  const auto stride = strides_of(dims);
  const std::size_t s = stride[subsystem];
  const std::size_t d = dims[subsystem];
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::size_t di = (i / s) % d;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::size_t dj = (j / s) % d;
      // swap the digits of the chosen factor between row and column
      out(i, j) = m(i - di * s + dj * s, j - dj * s + di * s);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
  return partial_transpose(rho.matrix(), rho.subsystem_dims(), subsystem);
}

double negativity(const DensityMatrix& rho, std::size_t subsystem) {
  double n = 0.0;
  for (double e : eigvalsh(partial_transpose(rho, subsystem)))
    if (e < 0.0) n -= e;
  return n;
}

double fidelity(const DensityMatrix& rho, std::span<const Complex> psi) {
  if (psi.size() != rho.dim()) throw std::invalid_argument("fidelity: state size mismatch");
  const Vector rpsi = rho.matrix() * psi;
  Complex s{};
  for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(psi[i]) * rpsi[i];
  return std::abs(s);
}

}  // namespace harvest::qmat
