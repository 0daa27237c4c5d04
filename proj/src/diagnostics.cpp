#include "geomc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geomc/errors.hpp"

namespace geomc {

double ess(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw DomainError("ess: need at least 10 values");
  for (double v : series) {
    if (!std::isfinite(v)) throw DomainError("ess: non-finite value");
  }
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  Vector centred(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) centred[static_cast<Eigen::Index>(i)] = series[i] - mean;

  const auto len = static_cast<Eigen::Index>(n);
  auto autocov = [&](Eigen::Index lag) {
    return centred.head(len - lag).dot(centred.tail(len - lag)) / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) throw UndefinedEssError("ess: series has zero variance");

  const Eigen::Index max_lag = len / 2;
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  for (Eigen::Index lag = 0; lag + 1 <= max_lag; lag += 2) {
    const double rho_even = lag == 0 ? 1.0 : autocov(lag) / c0;
    const double rho_odd = autocov(lag + 1) / c0;
    double gamma = rho_even + rho_odd;
    if (gamma <= 0.0) break;
    gamma = std::min(gamma, previous);
    previous = gamma;
    sum += gamma;
    ++pairs;
  }
  if (pairs == 0) throw UndefinedEssError("ess: first autocorrelation pair is not positive");
  const double tau = -1.0 + 2.0 * sum;
  if (!(tau > 0.0)) throw UndefinedEssError("ess: non-positive integrated autocorrelation");
  return static_cast<double>(n) / tau;
}

EssReport summarize(const ChainTrace& trace, double wall_seconds, std::size_t burn_in) {
  if (trace.empty()) throw DomainError("summarize: empty trace");
  if (burn_in >= trace.size()) throw DomainError("summarize: burn-in consumes the whole trace");

  const std::size_t kept = trace.size() - burn_in;
  const auto dim = trace.samples.front().size();
  EssReport report;
  report.samples = trace.size();
  report.burn_in = burn_in;
  report.acceptance_rate = trace.acceptance_rate();
  report.per_coordinate.resize(static_cast<std::size_t>(dim));

  std::vector<double> column(kept);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < kept; ++i) column[i] = trace.samples[burn_in + i][j];
    double value = 0.0;
    try {
      value = ess(column);
    } catch (const UndefinedEssError&) {
      value = 0.0;
    }
    report.per_coordinate[static_cast<std::size_t>(j)] = value;
  }
  report.mean_ess = std::accumulate(report.per_coordinate.begin(), report.per_coordinate.end(), 0.0) /
                    static_cast<double>(dim);
  report.ess_percent = 100.0 * report.mean_ess / static_cast<double>(kept);
  report.ess_percent_raw = 100.0 * report.mean_ess / static_cast<double>(trace.size());
  if (wall_seconds > 0.0) report.ess_per_second = report.mean_ess / wall_seconds;
  return report;
}

}  // namespace geomc
