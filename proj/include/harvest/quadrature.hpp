#pragma once

// Numerical evaluation of the field-correlation integrals
//   i_s(x) = int_0^inf dk g(k) sin(kx),  i_c(x) = int_0^inf dk g(k) cos(kx),
//   g(k) = (sin k - k cos k)^2 / k^5,
// directly from their definitions, as an oracle for the closed forms.
namespace harvest::quadrature {

struct QuadratureResult {
  double value;
  double abs_error;  // estimate reported by the integrator
};

QuadratureResult i_s_numeric(double x);
QuadratureResult i_c_numeric(double x);

}  // namespace harvest::quadrature
