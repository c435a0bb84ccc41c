#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "harvest/udw.hpp"

namespace harvest::udw {

namespace {

using Slots = std::array<DeltaSchedule::Slot, 4>;

// U = prod_u (cosh Y_u + m(t_u) sinh Y_u), m(t) = e^{i Omega t} |e><g| + h.c.
EvolvedCoefficients expand(const Slots& slots, double lambda, double gap_a, double gap_b) {
  EvolvedCoefficients out;
  const unsigned n_choices = lambda == 0.0 ? 1u : 16u;
  for (unsigned choice = 0; choice < n_choices; ++choice) {
    bool excited[2] = {false, false};
    Complex phase{1.0, 0.0};
    CoefficientTerm term{};
    for (std::size_t u = 0; u < 4; ++u) {
      const bool sinh = (choice >> u) & 1u;
      term.labels[u] = sinh ? Branch::Sinh : Branch::Cosh;
      if (!sinh) continue;
      const int d = slots[u].detector == Detector::A ? 0 : 1;
      const double omega = d == 0 ? gap_a : gap_b;
      phase *= std::polar(1.0, excited[d] ? -omega * slots[u].time : omega * slots[u].time);
      excited[d] = !excited[d];
    }
    term.phase = phase;
    out[2 * excited[0] + excited[1]].push_back(term);
  }
  return out;
}

int sinh_count(const CoefficientTerm& t) {
  int n = 0;
  for (Branch b : t.labels) n += b == Branch::Sinh ? 1 : 0;
  return n;
}

// <0| O_bra^dagger O_ket |0>: the bra string runs forward in time, the ket
// string backward. sinh(Y)^dagger = -sinh(Y) since Y is anti-Hermitian.
SignPattern pair_label(const CoefficientTerm& ket, const CoefficientTerm& bra) {
  unsigned mask = 0;
  for (std::size_t u = 0; u < 4; ++u) {
    if (bra.labels[u] == Branch::Sinh) mask |= 1u << u;
    if (ket.labels[u] == Branch::Sinh) mask |= 1u << (7 - u);
  }
  return SignPattern::from_mask(mask);
}

Complex element(const EvolvedCoefficients& c, std::size_t i, std::size_t j, const HTable& h) {
  Complex sum{};
  for (const auto& ket : c[i])
    for (const auto& bra : c[j]) {
      const double sign = sinh_count(bra) % 2 == 0 ? 1.0 : -1.0;
      sum += ket.phase * std::conj(bra.phase) * sign * h(pair_label(ket, bra));
    }
  return sum;
}

}  // namespace

EvolvedCoefficients evolved_coefficients(const DeltaSchedule& schedule) {
  return expand(schedule.slots(), schedule.lambda(), schedule.gap_a(), schedule.gap_b());
}

std::vector<RhoTerm> rho_element_terms(const EvolvedCoefficients& coeffs, std::size_t i, std::size_t j) {
  if (i >= kBasisSize || j >= kBasisSize) throw std::out_of_range("rho_element_terms: index out of range");
  std::vector<RhoTerm> terms;
  for (const auto& ket : coeffs[i])
    for (const auto& bra : coeffs[j]) {
      const double sign = sinh_count(bra) % 2 == 0 ? 1.0 : -1.0;
      terms.push_back({pair_label(ket, bra), ket.phase * std::conj(bra.phase) * sign});
    }
  return terms;
}

qmat::ComplexMatrix XState::to_matrix() const {
  qmat::ComplexMatrix m(4, 4);
  m(0, 0) = r11;
  m(1, 1) = r22;
  m(2, 2) = r33;
  m(3, 3) = r44;
  m(0, 3) = r14;
  m(3, 0) = std::conj(r14);
  m(1, 2) = r23;
  m(2, 1) = std::conj(r23);
  return m;
}

void XState::validate(double trace_tol, double psd_tol) const {
  const auto fail = [](const std::string& what) { throw qmat::NumericalError("XState: " + what); };
  if (!std::isfinite(r11) || !std::isfinite(r22) || !std::isfinite(r33) || !std::isfinite(r44) ||
      !std::isfinite(std::abs(r14)) || !std::isfinite(std::abs(r23))) {
    fail("non-finite entry");
  }
  if (std::abs(trace() - 1.0) > trace_tol) fail("trace " + std::to_string(trace()) + " differs from 1");
  if (std::min({r11, r22, r33, r44}) < -psd_tol) fail("negative population");
  if (std::norm(r14) > r11 * r44 + psd_tol) fail("|r14|^2 exceeds r11 r44");
  if (std::norm(r23) > r22 * r33 + psd_tol) fail("|r23|^2 exceeds r22 r33");
}

XState XState::from_matrix(const qmat::ComplexMatrix& m, double tol) {
  if (m.rows() != 4 || m.cols() != 4) throw qmat::DimensionError("XState: expected a 4x4 matrix");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool x_entry = i == j || i + j == 3;
      if (!x_entry && std::abs(m(i, j)) > tol) {
        throw std::invalid_argument("XState: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    ") breaks the X pattern");
      }
    }
  XState x;
  x.r11 = m(0, 0).real();
  x.r22 = m(1, 1).real();
  x.r33 = m(2, 2).real();
  x.r44 = m(3, 3).real();
  x.r14 = m(0, 3);
  x.r23 = m(1, 2);
  return x;
}

RhoAbEvaluator::RhoAbEvaluator(const DeltaSchedule& schedule)
    : schedule_(schedule), table_(schedule.context()) {}

XState RhoAbEvaluator::at(double gap_a, double gap_b) const {
  const auto c = expand(schedule_.slots(), schedule_.lambda(), gap_a, gap_b);
  XState x;
  const Complex d[4] = {element(c, 0, 0, table_), element(c, 1, 1, table_), element(c, 2, 2, table_),
                        element(c, 3, 3, table_)};
  for (const auto& v : d) {
    if (std::abs(v.imag()) > 1e-10) {
      throw qmat::NumericalError("rho_ab: diagonal entry has imaginary part " + std::to_string(v.imag()));
    }
  }
  x.r11 = d[0].real();
  x.r22 = d[1].real();
  x.r33 = d[2].real();
  x.r44 = d[3].real();
  x.r14 = element(c, 0, 3, table_);
  x.r23 = element(c, 1, 2, table_);
  return x;
}

XState rho_ab(const DeltaSchedule& schedule) {
  XState x = RhoAbEvaluator(schedule).at(schedule.gap_a(), schedule.gap_b());
  x.validate();
  return x;
}

std::array<double, 4> pt_eigenvalues(const XState& x) {
  const double s_inner = std::sqrt((x.r22 - x.r33) * (x.r22 - x.r33) + 4.0 * std::norm(x.r14));
  const double s_outer = std::sqrt((x.r11 - x.r44) * (x.r11 - x.r44) + 4.0 * std::norm(x.r23));
  return {0.5 * (x.r22 + x.r33 + s_inner), 0.5 * (x.r22 + x.r33 - s_inner), 0.5 * (x.r11 + x.r44 + s_outer),
          0.5 * (x.r11 + x.r44 - s_outer)};
}

double negativity_of(const XState& x) {
  double n = 0.0;
  for (double e : pt_eigenvalues(x)) n -= std::min(e, 0.0);
  return n;
}

double negativity_of(const DeltaSchedule& schedule) { return negativity_of(rho_ab(schedule)); }

std::array<bool, 3> commutator_flags(double t_b1, double t_a1, double t_a2) {
  const auto nonzero = [](double dt) { return dt != 0.0 && std::abs(dt) < 2.0; };
  return {nonzero(t_b1 - t_a1), nonzero(t_b1 - t_a2), nonzero(t_a2 - t_a1)};
}

}  // namespace harvest::udw
