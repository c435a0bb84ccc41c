#include <cmath>
#include <numbers>

#include "harvest/udw.hpp"

namespace harvest::udw {

namespace {

// Beyond this the closed form of i_c loses digits to cancellation between
// x^4 log terms; the large-x expansion is used instead.
constexpr double kIcAsymptoticFrom = 20.0;

// -sum_n c_n / x^(2n+2) with c_n = (-1)^n g^(2n+1)(0), g(k) = (sin k - k cos k)^2 / k^5.
constexpr double kIcAsymptotic[] = {1.0 / 9.0,     2.0 / 15.0,    8.0 / 35.0,     64.0 / 135.0,
                                    256.0 / 231.0, 256.0 / 91.0, 1024.0 / 135.0};

double i_c_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double term = inv2, sum = 0.0;
  for (double c : kIcAsymptotic) {
    sum += c * term;
    term *= inv2;
  }
  return -sum;
}

}  // namespace

double i_s(double x) {
  const double a = std::abs(x);
  if (a >= 2.0) return 0.0;
  return std::numbers::pi / 96.0 * x * (2.0 - a) * (2.0 - a) * (4.0 + a);
}

double i_c(double x) {
  const double a = std::abs(x);
  if (a == 0.0) return 0.25;
  if (a == 2.0) return (5.0 - 8.0 * std::numbers::ln2) / 12.0;
  if (a >= kIcAsymptoticFrom) return i_c_asymptotic(a);

  const long double y = a;
  const long double y2 = y * y;
  const long double lp = std::log(2.0L + y);
  const long double value = 24.0L + 4.0L * y2 - 2.0L * y2 * (y2 - 12.0L) * std::log(y) - 16.0L * y * lp -
                            12.0L * y2 * lp + y2 * y2 * lp +
                            y * (y - 2.0L) * (y - 2.0L) * (4.0L + y) * std::log(std::abs(y - 2.0L));
  return static_cast<double>(value / 96.0L);
}

double theta_scale(double lambda) { return 9.0 * lambda * lambda / (4.0 * std::numbers::pi * std::numbers::pi); }

double overlap_scale(double lambda) { return 9.0 * lambda * lambda / (16.0 * std::numbers::pi * std::numbers::pi); }

double theta(double dt, double lambda) { return theta_scale(lambda) * i_s(dt); }

double vacuum_overlap(const std::array<int, 4>& s, const std::array<double, 4>& times, double lambda) {
  double q = 0.0;
  for (std::size_t u = 0; u < 4; ++u) {
    if (s[u] == 0) continue;
    q += s[u] * s[u] * i_c(0.0);
    for (std::size_t v = u + 1; v < 4; ++v) q += 2.0 * s[u] * s[v] * i_c(times[v] - times[u]);
  }
  return std::exp(-overlap_scale(lambda) * q);
}

}  // namespace harvest::udw
