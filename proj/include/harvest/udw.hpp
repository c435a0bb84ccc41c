#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/qmat.hpp"

// Two Unruh-DeWitt qubit detectors at the origin, each delta-coupled at most
// twice to the vacuum of a massless scalar field in 3+1 dimensions with
// hard-sphere smearing of radius 1. Times are in units of the smearing radius,
// gaps in its inverse.
namespace harvest::udw {

using Complex = std::complex<double>;

//------------------------------------------------------------------------------
// Field correlation integrals
//------------------------------------------------------------------------------

// int_0^inf dk (sin k - k cos k)^2 / k^5 sin(kx); odd, supported on |x| < 2.
double i_s(double x);
// int_0^inf dk (sin k - k cos k)^2 / k^5 cos(kx); even, i_c(0) = 1/4.
double i_c(double x);

// Prefactor of the commutator angles, 9 lambda^2 / (4 pi^2).
double theta_scale(double lambda);
// Prefactor of the vacuum-overlap exponent, 9 lambda^2 / (16 pi^2).
double overlap_scale(double lambda);

// [Y(t2), Y(t1)] = i theta(t2 - t1) for two strength-lambda couplings.
double theta(double dt, double lambda);

// <0| D |0> for the displacement generated by sum_u s_u Y(t_u), s_u in {-2, 0, 2}.
double vacuum_overlap(const std::array<int, 4>& s, const std::array<double, 4>& times, double lambda);

//------------------------------------------------------------------------------
// Sign patterns and the vacuum expectation values h, K
//------------------------------------------------------------------------------

// Eight labels l_1..l_8 in {+1, -1}. Stored as a bit mask, bit k set iff l_{k+1} = -1.
class SignPattern {
 public:
  static constexpr std::size_t kSize = 8;
  static constexpr unsigned kCount = 1u << kSize;

  SignPattern() = default;
  explicit SignPattern(const std::array<int, kSize>& labels);
  // "++--++--"
  static SignPattern parse(std::string_view s);
  static SignPattern from_mask(unsigned mask);

  int operator[](std::size_t k) const { return (mask_ >> k) & 1u ? -1 : 1; }
  unsigned mask() const { return mask_; }
  int minus_count() const;
  std::string to_string() const;

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  unsigned mask_ = 0;
};

// Coupling times of the four slots of the operator string, in time order, each
// of strength lambda. Slot u appears at string positions u and 9 - u.
struct CouplingContext {
  std::array<double, 4> times{};
  double lambda = 0.0;
};

// K(p) = <0| e^{p_1 Y_1} e^{p_2 Y_2} e^{p_3 Y_3} e^{p_4 Y_4} e^{p_5 Y_4} e^{p_6 Y_3} e^{p_7 Y_2} e^{p_8 Y_1} |0>.
Complex k_function(const SignPattern& p, const CouplingContext& ctx);

// How h weights K(p): Hyperbolic is y^{+-} = (e^Y +- e^{-Y}) / 2, i.e.
// f(l, p) = -1 iff l = p = -1 and +1 otherwise. Literal keeps f = 0 off that
// case; it makes almost every h vanish and exists only to exercise the oracles.
enum class FConvention { Hyperbolic, Literal };

// h(l) = <0| y_1^{l_1} y_2^{l_2} y_3^{l_3} y_4^{l_4} y_4^{l_5} y_3^{l_6} y_2^{l_7} y_1^{l_8} |0>
// with y^+ = cosh Y, y^- = sinh Y, by the direct 256-term sum over K.
Complex h_function(const SignPattern& l, const CouplingContext& ctx, FConvention f = FConvention::Hyperbolic);

// All 256 values of h at once via a Walsh-Hadamard transform of the K table.
class HTable {
 public:
  explicit HTable(const CouplingContext& ctx);

  Complex operator()(const SignPattern& l) const { return h_[l.mask()]; }
  Complex at(unsigned mask) const { return h_[mask]; }
  const CouplingContext& context() const { return ctx_; }

 private:
  CouplingContext ctx_;
  std::array<Complex, SignPattern::kCount> h_{};
};

//------------------------------------------------------------------------------
// Schedules
//------------------------------------------------------------------------------

enum class Detector { A, B };

const char* to_string(Detector d);

struct DeltaEvent {
  Detector detector;
  double time;
  int slot;  // 1 or 2 within the detector
};

// One or two delta couplings per detector, each of strength lambda. A detector
// that couples once is treated as two coincident strength-lambda events, so its
// single coupling carries strength 2 lambda.
class DeltaSchedule {
 public:
  struct Slot {
    Detector detector;
    double time;
  };

  // Throws std::invalid_argument on a malformed schedule: non-finite values,
  // lambda < 0, zero or more than two events for a detector, slots out of time
  // order, or an A event and a B event at exactly the same time.
  DeltaSchedule(std::vector<DeltaEvent> events, double lambda, double gap_a, double gap_b);

  // Pattern letters in time order with one time per letter, e.g.
  // from_pattern("BAA", {t_b1, t_a1, t_a2}, ...). Case-insensitive.
  static DeltaSchedule from_pattern(std::string_view pattern, std::span<const double> times, double lambda,
                                    double gap_a, double gap_b);

  const std::vector<DeltaEvent>& events() const { return events_; }  // time order
  double lambda() const { return lambda_; }
  double gap_a() const { return gap_a_; }
  double gap_b() const { return gap_b_; }
  double gap(Detector d) const { return d == Detector::A ? gap_a_ : gap_b_; }

  std::string pattern() const;
  int coupling_count(Detector d) const;
  double event_time(Detector d, int slot) const;

  // The four-slot form used by the closed forms, in time order.
  std::array<Slot, 4> slots() const;
  CouplingContext context() const;

  DeltaSchedule with_gaps(double gap_a, double gap_b) const;

 private:
  std::vector<DeltaEvent> events_;
  double lambda_;
  double gap_a_;
  double gap_b_;
};

// Patterns accepted by DeltaSchedule, in upper case.
std::span<const std::string_view> supported_patterns();

//------------------------------------------------------------------------------
// Evolved state and the detector density matrix
//------------------------------------------------------------------------------

enum class Branch { Cosh, Sinh };

// phase * (product over slots of cosh or sinh of Y_slot) acting on the vacuum;
// labels are in slot (time) order, the operator product applies the earliest first.
struct CoefficientTerm {
  Complex phase;
  std::array<Branch, 4> labels;
};

// Index of the two-detector basis {gg, ge, eg, ee} (A first).
inline constexpr std::size_t kBasisSize = 4;
using EvolvedCoefficients = std::array<std::vector<CoefficientTerm>, kBasisSize>;

// Field-operator coefficients of U|g_A g_B>|0> on each detector basis vector.
// At lambda = 0 every sinh vanishes and only the all-cosh term is kept.
EvolvedCoefficients evolved_coefficients(const DeltaSchedule& schedule);

// rho_ij = sum_k weight_k h(label_k).
struct RhoTerm {
  SignPattern label;
  Complex weight;
};
std::vector<RhoTerm> rho_element_terms(const EvolvedCoefficients& coeffs, std::size_t i, std::size_t j);

// Density matrix in {gg, ge, eg, ee} with the X zero pattern.
struct XState {
  double r11 = 1.0, r22 = 0.0, r33 = 0.0, r44 = 0.0;
  Complex r14{}, r23{};

  double trace() const { return r11 + r22 + r33 + r44; }
  qmat::ComplexMatrix to_matrix() const;
  // Throws qmat::NumericalError if the trace or block positivity is violated.
  void validate(double trace_tol = 1e-10, double psd_tol = 1e-9) const;
  // Reads the six X entries; throws if any other entry exceeds `tol`.
  static XState from_matrix(const qmat::ComplexMatrix& m, double tol = 1e-10);
};

XState rho_ab(const DeltaSchedule& schedule);

// Caches the h table of a schedule's times and lambda so the detector gaps can
// be swept cheaply.
class RhoAbEvaluator {
 public:
  explicit RhoAbEvaluator(const DeltaSchedule& schedule);

  XState at(double gap_a, double gap_b) const;
  const DeltaSchedule& schedule() const { return schedule_; }

 private:
  DeltaSchedule schedule_;
  HTable table_;
};

// Eigenvalues of the partial transpose of an X state, closed form, unsorted.
// Transposing B moves r14 into the (ge, eg) block and r23 into the (gg, ee)
// block: E_1,2 pair r22, r33 with |r14|; E_3,4 pair r11, r44 with |r23|.
std::array<double, 4> pt_eigenvalues(const XState& x);

double negativity_of(const XState& x);
double negativity_of(const DeltaSchedule& schedule);

// For three-event schedules with B coupling once: whether each of the angles
// theta(t_B1 - t_A1), theta(t_B1 - t_A2), theta(t_A2 - t_A1) is nonzero, that
// is, whether the separation lies strictly inside (0, 2).
std::array<bool, 3> commutator_flags(double t_b1, double t_a1, double t_a2);

}  // namespace harvest::udw
