#ifndef GEOMC_DIAGNOSTICS_HPP
#define GEOMC_DIAGNOSTICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "geomc/sampler.hpp"

namespace geomc {

/// Effective sample size N / tau with tau = -1 + 2 sum_m Gamma_m, where
/// Gamma_m = rho_{2m} + rho_{2m+1} are pair sums of sample autocorrelations,
/// truncated at the first non-positive pair and forced non-increasing
/// (Geyer's initial monotone sequence). Can exceed N for antithetic series.
/// Throws DomainError for fewer than 10 values or non-finite input and
/// UndefinedEssError for constant series or a non-positive first pair.
double ess(std::span<const double> series);

struct EssReport {
  std::vector<double> per_coordinate;
  double mean_ess = 0.0;
  /// 100 * mean_ess / (samples after burn-in).
  double ess_percent = 0.0;
  /// 100 * mean_ess / (all samples).
  double ess_percent_raw = 0.0;
  /// Absent when no wall time was supplied.
  std::optional<double> ess_per_second;
  double acceptance_rate = 0.0;
  std::size_t samples = 0;
  std::size_t burn_in = 0;
};

/// Coordinate-wise ESS of trace samples after discarding `burn_in` leading
/// states. Coordinates whose ESS is undefined (constant) count as 0.
EssReport summarize(const ChainTrace& trace, double wall_seconds, std::size_t burn_in = 0);

}  // namespace geomc

#endif  // GEOMC_DIAGNOSTICS_HPP
