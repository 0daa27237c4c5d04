#include "geomc/probit.hpp"

#include <cmath>
#include <numbers>

#include "geomc/errors.hpp"

namespace geomc {

namespace {

constexpr double kTailSwitch = -1.0;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw DomainError(std::string(name) + ": non-finite argument");
}

}  // namespace

double erfcx(double z) {
  if (!std::isfinite(z)) {
    if (z == INFINITY) return 0.0;
    throw DomainError("erfcx: non-finite argument");
  }
  if (z < 0.0) throw DomainError("erfcx: negative argument");
  if (z < 5.0) return std::erfc(z) * std::exp(z * z);
  // Continued fraction erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))),
  // evaluated bottom-up. 80 levels is past convergence for z >= 5.
  double tail = z;
  for (int k = 80; k >= 1; --k) tail = z + 0.5 * k / tail;
  return 1.0 / (std::sqrt(std::numbers::pi) * tail);
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (normal_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double log_probit(double x) {
  require_finite(x, "log_probit");
  if (x < kTailSwitch) {
    const double z = -x * kInvSqrt2;
    return std::log(0.5 * erfcx(z)) - z * z;
  }
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  return std::log(normal_cdf(x));
}

double probit_ratio(double x) {
  require_finite(x, "probit_ratio");
  if (x < kTailSwitch) {
    return std::sqrt(2.0 / std::numbers::pi) / erfcx(-x * kInvSqrt2);
  }
  return normal_pdf(x) / normal_cdf(x);
}

}  // namespace geomc
