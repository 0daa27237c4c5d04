#ifndef GEOMC_PROBIT_HPP
#define GEOMC_PROBIT_HPP

namespace geomc {

/// Scaled complementary error function exp(z^2) erfc(z), for z >= 0.
double erfcx(double z);

double normal_pdf(double x);
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// log Phi(x). Below x = -1 the scaled complementary error function is used
/// so the result stays finite far into the lower tail.
double log_probit(double x);

/// phi(x) / Phi(x), the inverse Mills ratio of -x. Finite and positive for all
/// finite x; behaves like -x as x -> -inf.
double probit_ratio(double x);

}  // namespace geomc

#endif  // GEOMC_PROBIT_HPP
