#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "harvest/udw.hpp"

// Brute-force check of the closed-form vacuum expectation values: the field is
// replaced by a few bosonic modes whose displacement generators reproduce the
// continuum overlaps and commutators exactly, and every operator product is
// evaluated by direct state-vector arithmetic in a truncated Fock space.
namespace harvest::fock {

using Complex = std::complex<double>;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Y_u = sum_m (beta_u[m] a_m^dagger - conj(beta_u[m]) a_m), one u per coupling slot.
struct ModeConfig {
  static constexpr std::size_t kMaxModes = 4;

  std::size_t n_modes = 0;
  std::vector<std::size_t> cutoffs;             // max occupation per mode
  std::vector<std::vector<Complex>> amplitudes;  // [slot][mode]

  std::size_t hilbert_dim() const;
};

// Strictly above this total Fock dimension the oracle refuses to run.
inline constexpr std::size_t kMaxHilbertDim = std::size_t{1} << 21;
// Occupation tail mass allowed beyond each mode's cutoff.
inline constexpr double kTailBound = 1e-10;

// Modes reproducing, for strength-lambda couplings at `slot_times`,
//   sum_m conj(beta_u[m]) beta_v[m] = (9 lambda^2 / 8 pi^2) (i_c(t_v - t_u) + i i_s(t_v - t_u)),
// which fixes <0|exp(sum_u s_u Y_u)|0> and [Y_v, Y_u] = i theta(t_v - t_u).
// The Gram matrix is factored by eigendecomposition; modes below 1e-14 of the
// largest eigenvalue are dropped. Cutoffs are the smallest that keep the tail
// bound for every amplitude the brute-force products can reach.
ModeConfig match_amplitudes(std::span<const double> slot_times, double lambda);
// The four coupling slots of a schedule (a single coupling counts twice).
ModeConfig match_amplitudes(const udw::DeltaSchedule& schedule);

// Largest deviation of the realized Gram matrix from its target.
double gram_residual(const ModeConfig& cfg, std::span<const double> slot_times, double lambda);

// Occupation tail beyond the cutoffs for the worst superposed amplitude
// sum_u c_u beta_u, c_u in {-2..2}; the bound checked against kTailBound.
double tail_mass(const ModeConfig& cfg);

// Same mode content with every cutoff multiplied by `factor`.
ModeConfig with_scaled_cutoffs(const ModeConfig& cfg, std::size_t factor);

// <0| y_1^{l_1} y_2^{l_2} y_3^{l_3} y_4^{l_4} y_4^{l_5} y_3^{l_6} y_2^{l_7} y_1^{l_8} |0>
// at fixed cutoffs; y^+ = cosh Y, y^- = sinh Y by Taylor series on vectors.
// Throws PrecisionError when the tail bound fails. Requires four slots.
Complex brute_h_fixed(const udw::SignPattern& l, const ModeConfig& cfg);

// brute_h_fixed with cutoffs doubled until successive values agree within 1e-8.
Complex brute_h(const udw::SignPattern& l, const ModeConfig& cfg);

// Detector density matrix in {gg, ge, eg, ee} by evolving |g_A g_B>|0> through
// cosh(Y) + m(t) sinh(Y) per slot and tracing out the modes, with the same
// cutoff doubling as brute_h.
qmat::ComplexMatrix brute_rho_ab(const udw::DeltaSchedule& schedule);

}  // namespace harvest::fock
