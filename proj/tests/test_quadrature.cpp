#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "harvest/quadrature.hpp"
#include "harvest/udw.hpp"

using namespace harvest;

TEST_CASE("quadrature: i_s closed form matches the integral", "[quadrature]") {
  for (int k = 0; k < 25; ++k) {
    const double x = -1.2 + 4.4 * k / 24.0;
    INFO("x = " << x);
    const auto r = quadrature::i_s_numeric(x);
    CHECK(std::abs(r.value - udw::i_s(x)) < 1e-8);
    CHECK(r.abs_error < 1e-8);
  }
}

TEST_CASE("quadrature: i_c closed form matches the integral", "[quadrature]") {
  for (int k = 0; k < 25; ++k) {
    const double x = -3.0 + 28.0 * k / 24.0;
    INFO("x = " << x);
    const auto r = quadrature::i_c_numeric(x);
    CHECK(std::abs(r.value - udw::i_c(x)) < 1e-8);
  }
}

TEST_CASE("quadrature: special points", "[quadrature]") {
  CHECK(std::abs(quadrature::i_c_numeric(0.0).value - 0.25) < 1e-10);
  CHECK(std::abs(quadrature::i_c_numeric(2.0).value - (5.0 - 8.0 * std::log(2.0)) / 12.0) < 1e-10);
  CHECK(std::abs(quadrature::i_s_numeric(0.0).value) < 1e-12);
  CHECK(std::abs(quadrature::i_s_numeric(2.0).value) < 1e-10);
  CHECK(std::abs(quadrature::i_s_numeric(3.5).value) < 1e-10);
  CHECK(std::abs(quadrature::i_c_numeric(40.0).value - udw::i_c(40.0)) < 1e-10);
}
