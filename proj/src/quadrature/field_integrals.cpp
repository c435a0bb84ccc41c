#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "harvest/quadrature.hpp"

namespace harvest::quadrature {

namespace {

// Split point: [0, K0] by adaptive Gauss-Kronrod, [K0, inf) as pure-frequency
// Fourier integrals of the rational amplitudes of g.
constexpr double kSplit = 20.0;
constexpr double kEpsAbs = 1e-13;
constexpr double kEpsRel = 1e-12;
constexpr std::size_t kLimit = 2000;

double g(double k) {
  if (k < 0.1) {
    // sin k - k cos k = sum_n (-1)^(n+1) 2n k^(2n+1) / (2n+1)!
    const double k2 = k * k;
    const double f = k * k2 * (1.0 / 3.0 - k2 * (1.0 / 30.0 - k2 * (1.0 / 840.0 - k2 / 45360.0)));
    return f * f / (k2 * k2 * k);
  }
  const double f = std::sin(k) - k * std::cos(k);
  return f * f / std::pow(k, 5);
}

struct Workspace {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(kLimit);
  gsl_integration_workspace* cycle = gsl_integration_workspace_alloc(kLimit);
  ~Workspace() {
    gsl_integration_workspace_free(w);
    gsl_integration_workspace_free(cycle);
  }
};

double trampoline(double k, void* p) { return (*static_cast<std::function<double(double)>*>(p))(k); }

void check(int status, const char* what) {
  if (status != GSL_SUCCESS) {
    throw std::runtime_error(std::string("quadrature: ") + what + " failed: " + gsl_strerror(status));
  }
}

QuadratureResult head(std::function<double(double)> f) {
  Workspace ws;
  gsl_function F{&trampoline, &f};
  QuadratureResult r{};
  check(gsl_integration_qag(&F, 0.0, kSplit, kEpsAbs, kEpsRel, kLimit, GSL_INTEG_GAUSS61, ws.w, &r.value,
                            &r.abs_error),
        "qag");
  return r;
}

// int_{K0}^inf amp(k) trig(omega k) dk, omega > 0.
QuadratureResult fourier_tail(double (*amp)(double), double omega, bool sine) {
  Workspace ws;
  std::unique_ptr<gsl_integration_qawo_table, decltype(&gsl_integration_qawo_table_free)> table(
      gsl_integration_qawo_table_alloc(omega, 1.0, sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 50),
      &gsl_integration_qawo_table_free);
  gsl_function F{[](double k, void* p) { return reinterpret_cast<double (*)(double)>(p)(k); },
                 reinterpret_cast<void*>(amp)};
  QuadratureResult r{};
  check(gsl_integration_qawf(&F, kSplit, kEpsAbs, kLimit, ws.w, ws.cycle, table.get(), &r.value, &r.abs_error),
        "qawf");
  return r;
}

// (sin k - k cos k)^2 / k^5 = a(k) + b(k) cos 2k + c(k) sin 2k
double amp_a(double k) { return (1.0 + k * k) / (2.0 * std::pow(k, 5)); }
double amp_b(double k) { return (k * k - 1.0) / (2.0 * std::pow(k, 5)); }
double amp_c(double k) { return -1.0 / std::pow(k, 4); }

// Closed-form tails of the amplitudes alone (zero frequency).
double int_a() { return 1.0 / (8.0 * std::pow(kSplit, 4)) + 1.0 / (4.0 * kSplit * kSplit); }
double int_b() { return 1.0 / (4.0 * kSplit * kSplit) - 1.0 / (8.0 * std::pow(kSplit, 4)); }
double int_c() { return -1.0 / (3.0 * std::pow(kSplit, 3)); }

// int_{K0}^inf amp(k) sin(omega k) dk for any real omega.
QuadratureResult sin_tail(double (*amp)(double), double omega) {
  if (omega == 0.0) return {0.0, 0.0};
  QuadratureResult r = fourier_tail(amp, std::abs(omega), true);
  if (omega < 0.0) r.value = -r.value;
  return r;
}

QuadratureResult cos_tail(double (*amp)(double), double (*closed)(), double omega) {
  if (omega == 0.0) return {closed(), 0.0};
  return fourier_tail(amp, std::abs(omega), false);
}

void add(QuadratureResult& acc, const QuadratureResult& r, double scale) {
  acc.value += scale * r.value;
  acc.abs_error += std::abs(scale) * r.abs_error;
}

struct HandlerOff {
  gsl_error_handler_t* prev = gsl_set_error_handler_off();
  ~HandlerOff() { gsl_set_error_handler(prev); }
};

}  // namespace

QuadratureResult i_s_numeric(double x) {
  HandlerOff guard;
  QuadratureResult r = head([x](double k) { return g(k) * std::sin(k * x); });
  // a sin(xk) + (b/2)(sin((x+2)k) + sin((x-2)k)) + (c/2)(cos((x-2)k) - cos((x+2)k))
  add(r, sin_tail(amp_a, x), 1.0);
  add(r, sin_tail(amp_b, x + 2.0), 0.5);
  add(r, sin_tail(amp_b, x - 2.0), 0.5);
  add(r, cos_tail(amp_c, int_c, x - 2.0), 0.5);
  add(r, cos_tail(amp_c, int_c, x + 2.0), -0.5);
  return r;
}

QuadratureResult i_c_numeric(double x) {
  HandlerOff guard;
  QuadratureResult r = head([x](double k) { return g(k) * std::cos(k * x); });
  // a cos(xk) + (b/2)(cos((x+2)k) + cos((x-2)k)) + (c/2)(sin((x+2)k) - sin((x-2)k))
  add(r, cos_tail(amp_a, int_a, x), 1.0);
  add(r, cos_tail(amp_b, int_b, x + 2.0), 0.5);
  add(r, cos_tail(amp_b, int_b, x - 2.0), 0.5);
  add(r, sin_tail(amp_c, x + 2.0), 0.5);
  add(r, sin_tail(amp_c, x - 2.0), -0.5);
  return r;
}

}  // namespace harvest::quadrature
