#ifndef GEOMC_TEMPERING_HPP
#define GEOMC_TEMPERING_HPP

#include <cstddef>
#include <vector>

#include "geomc/rng.hpp"
#include "geomc/sampler.hpp"
#include "geomc/targets.hpp"

namespace geomc {

/// Target with log-density and gradient scaled by rho in (0, 1].
TargetDensity tempered(const TargetDensity& target, double rho);

/// Strictly ascending inverse temperatures in (0, 1], ending at exactly 1.
class TemperatureLadder {
 public:
  explicit TemperatureLadder(std::vector<double> rhos);

  /// rho_k = k / n for k = 1..n, i.e. (0.1, 0.2, ..., 1.0) for n = 10.
  static TemperatureLadder uniform(std::size_t n);
  /// n values spaced geometrically from `lowest` to 1.
  static TemperatureLadder geometric(std::size_t n, double lowest);

  const std::vector<double>& rhos() const noexcept { return rhos_; }
  std::size_t size() const noexcept { return rhos_.size(); }
  double operator[](std::size_t k) const { return rhos_[k]; }

 private:
  std::vector<double> rhos_;
};

/// One chain state per rung plus the cold-chain trace and exchange counts.
/// Rung k targets [pi]^rho_k; the last rung (rho = 1) is the cold chain.
struct EnsembleState {
  std::vector<Vector> positions;
  /// Untempered log pi at each position.
  std::vector<double> log_density;
  /// Per-rung random streams, split once from the driver seed.
  std::vector<Rng> rung_rngs;
  ChainTrace cold_trace;
  /// Attempts and accepted swaps per adjacent pair (k, k+1).
  std::vector<std::size_t> swap_attempts;
  std::vector<std::size_t> swap_accepts;
};

/// All rungs start at x_init; rung k gets stream rng.split(k).
EnsembleState make_ensemble(const TargetDensity& target, const TemperatureLadder& ladder,
                            const Vector& x_init, const Rng& rng);

/// log of the swap acceptance ratio for neighbouring rungs holding states with
/// untempered log-densities lp_lo (at rho_lo) and lp_hi (at rho_hi).
double swap_log_ratio(double rho_lo, double rho_hi, double lp_lo, double lp_hi);

struct PtOptions {
  std::size_t exchanges = 10;
  /// Run phase-A rung updates on worker threads. Results do not depend on it.
  bool parallel = false;
};

/// One parallel-tempering sweep: every rung takes one kernel transition
/// against its tempered target, then `exchanges` random adjacent swaps are
/// proposed with the Metropolis correction. Appends the cold chain's state to
/// cold_trace. `kernels` has one entry per rung.
void pt_sweep(EnsembleState& ensemble, const TargetDensity& target,
              const TemperatureLadder& ladder, const std::vector<KernelKind>& kernels,
              const PtOptions& options, Rng& rng);

/// Runs `sweeps` sweeps with the same kernel on every rung.
EnsembleState run_parallel_tempering(const KernelKind& kernel, const TargetDensity& target,
                                     const TemperatureLadder& ladder, const Vector& x_init,
                                     std::size_t sweeps, const PtOptions& options, Rng& rng);

}  // namespace geomc

#endif  // GEOMC_TEMPERING_HPP
