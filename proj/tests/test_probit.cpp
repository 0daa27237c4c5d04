#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geomc/errors.hpp"
#include "geomc/probit.hpp"

using namespace geomc;

namespace {

// log Phi(x) for x << 0 from Phi(x) = phi(x) * int_0^inf exp(x s - s^2/2) ds,
// integrated with composite Simpson on a grid fine enough for the integrand's
// exp(x s) decay.
double log_probit_quadrature(double x) {
  const double upper = 60.0 / std::abs(x);
  const int n = 200000;
  const double h = upper / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::exp(x * s - 0.5 * s * s);
  }
  const double integral = sum * h / 3.0;
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(integral);
}

}  // namespace

TEST_CASE("log_probit and probit_ratio at zero") {
  CHECK(log_probit(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(probit_ratio(0.0) == doctest::Approx(0.7978845608028654).epsilon(1e-14));
}

TEST_CASE("log_probit deep in the lower tail matches quadrature") {
  for (double x : {-30.0, -10.0, -5.0, -2.0}) {
    const double oracle = log_probit_quadrature(x);
    CAPTURE(x);
    CHECK(std::isfinite(log_probit(x)));
    CHECK(std::abs(log_probit(x) - oracle) < 1e-8 * std::abs(oracle));
  }
  CHECK(std::isfinite(log_probit(-40.0)));
}

TEST_CASE("log_probit agrees with direct evaluation where that is accurate") {
  for (double x = -5.0; x <= 8.0; x += 0.125) {
    const double direct = std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
    CAPTURE(x);
    CHECK(log_probit(x) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(log_probit(40.0) <= 0.0);
  CHECK(log_probit(40.0) > -1e-300);
}

TEST_CASE("probit_ratio times Phi equals phi") {
  for (double x = -8.0; x <= 8.0; x += 0.0625) {
    CAPTURE(x);
    CHECK(probit_ratio(x) * normal_cdf(x) == doctest::Approx(normal_pdf(x)).epsilon(1e-12));
  }
}

TEST_CASE("probit_ratio is positive and tends to -x in the lower tail") {
  // phi(x) itself underflows past x ~ 38.6, so positivity is checked below that.
  double previous = INFINITY;
  for (double x = -1e6; x < 45.0; x = x < -10.0 ? x / 1.5 : x + 0.25) {
    const double r = probit_ratio(x);
    CAPTURE(x);
    CHECK(std::isfinite(r));
    CHECK(r >= 0.0);
    if (x < 37.0) CHECK(r > 0.0);
    CHECK(r <= previous);
    previous = r;
  }
  for (double x : {-50.0, -500.0, -1e5}) {
    // phi/Phi = -x + 1/(-x) - 2/(-x)^3 + ...
    const double asym = -x - 1.0 / x + 2.0 / (x * x * x);
    CHECK(probit_ratio(x) == doctest::Approx(asym).epsilon(1e-8));
  }
}

TEST_CASE("stable branches are continuous at the switch point") {
  const double below = std::nextafter(-1.0, -2.0);
  CHECK(log_probit(below) == doctest::Approx(log_probit(-1.0)).epsilon(1e-14));
  CHECK(probit_ratio(below) == doctest::Approx(probit_ratio(-1.0)).epsilon(1e-14));
}

TEST_CASE("erfcx matches exp(z^2) erfc(z) and its continued fraction tail") {
  for (double z = 0.0; z < 9.0; z += 0.1) {
    const double direct = std::exp(z * z) * std::erfc(z);
    CAPTURE(z);
    CHECK(erfcx(z) == doctest::Approx(direct).epsilon(1e-12));
  }
  // Large-argument asymptotics: erfcx(z) ~ 1/(z sqrt(pi)) (1 - 1/(2 z^2) + 3/(4 z^4)).
  for (double z : {30.0, 100.0, 1e4}) {
    const double asym = (1.0 - 0.5 / (z * z) + 0.75 / std::pow(z, 4)) / (z * std::sqrt(std::numbers::pi));
    CHECK(erfcx(z) == doctest::Approx(asym).epsilon(1e-8));
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  for (double p : {1e-10, 0.01, 0.3, 0.5, 0.9, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("non-finite input is a domain error") {
  CHECK_THROWS_AS(log_probit(std::nan("")), DomainError);
  CHECK_THROWS_AS(probit_ratio(INFINITY), DomainError);
  CHECK_THROWS_AS(erfcx(std::nan("")), DomainError);
}
