#include "geomc/tempering.hpp"

#include <cmath>
#include <exception>
#include <thread>

#include "geomc/errors.hpp"

namespace geomc {

TargetDensity tempered(const TargetDensity& target, double rho) {
  if (!(rho > 0.0) || rho > 1.0) throw DomainError("tempered: rho must lie in (0, 1]");
  return TargetDensity(
      target.manifold(), [target, rho](const Vector& x) { return rho * target.log_density(x); },
      [target, rho](const Vector& x) -> Vector { return rho * target.gradient(x); },
      target.name() + "^" + std::to_string(rho));
}

TemperatureLadder::TemperatureLadder(std::vector<double> rhos) : rhos_(std::move(rhos)) {
  if (rhos_.empty()) throw DomainError("TemperatureLadder: empty ladder");
  for (std::size_t k = 0; k < rhos_.size(); ++k) {
    if (!(rhos_[k] > 0.0) || rhos_[k] > 1.0) {
      throw DomainError("TemperatureLadder: rho values must lie in (0, 1]");
    }
    if (k > 0 && !(rhos_[k] > rhos_[k - 1])) {
      throw DomainError("TemperatureLadder: rho values must be strictly ascending");
    }
  }
  if (rhos_.back() != 1.0) throw DomainError("TemperatureLadder: last rho must be 1");
}

TemperatureLadder TemperatureLadder::uniform(std::size_t n) {
  std::vector<double> rhos(n);
  for (std::size_t k = 0; k < n; ++k) {
    rhos[k] = static_cast<double>(k + 1) / static_cast<double>(n);
  }
  return TemperatureLadder(std::move(rhos));
}

TemperatureLadder TemperatureLadder::geometric(std::size_t n, double lowest) {
  if (n == 1) return TemperatureLadder({1.0});
  if (!(lowest > 0.0 && lowest < 1.0)) throw DomainError("geometric ladder: lowest in (0, 1)");
  std::vector<double> rhos(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = static_cast<double>(n - 1 - k) / static_cast<double>(n - 1);
    rhos[k] = std::pow(lowest, frac);
  }
  rhos.back() = 1.0;
  return TemperatureLadder(std::move(rhos));
}

EnsembleState make_ensemble(const TargetDensity& target, const TemperatureLadder& ladder,
                            const Vector& x_init, const Rng& rng) {
  target.manifold().require_member(x_init);
  const double lp = target.log_density(x_init);
  if (!std::isfinite(lp)) throw DomainError("make_ensemble: start has non-finite log-density");
  EnsembleState e;
  e.positions.assign(ladder.size(), x_init);
  e.log_density.assign(ladder.size(), lp);
  for (std::size_t k = 0; k < ladder.size(); ++k) e.rung_rngs.push_back(rng.split(k));
  const std::size_t pairs = ladder.size() > 0 ? ladder.size() - 1 : 0;
  e.swap_attempts.assign(pairs, 0);
  e.swap_accepts.assign(pairs, 0);
  return e;
}

double swap_log_ratio(double rho_lo, double rho_hi, double lp_lo, double lp_hi) {
  return (rho_lo - rho_hi) * (lp_hi - lp_lo);
}

void pt_sweep(EnsembleState& ensemble, const TargetDensity& target,
              const TemperatureLadder& ladder, const std::vector<KernelKind>& kernels,
              const PtOptions& options, Rng& rng) {
  const std::size_t rungs = ladder.size();
  if (ensemble.positions.size() != rungs || kernels.size() != rungs ||
      ensemble.rung_rngs.size() != rungs) {
    throw DimensionError("pt_sweep: ensemble, ladder and kernels disagree on rung count");
  }

  // Phase A: independent rung updates. Transitions see the tempered
  // log-density; the ensemble keeps the untempered value.
  std::vector<Transition> moves(rungs);
  std::vector<std::exception_ptr> failures(rungs);
  auto update = [&](std::size_t k) {
    try {
      const TargetDensity rung_target = tempered(target, ladder[k]);
      moves[k] = transition(kernels[k], rung_target, ensemble.positions[k],
                            ladder[k] * ensemble.log_density[k], ensemble.rung_rngs[k]);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };
  if (options.parallel && rungs > 1) {
    std::vector<std::jthread> workers;
    workers.reserve(rungs);
    for (std::size_t k = 0; k < rungs; ++k) workers.emplace_back(update, k);
  } else {
    for (std::size_t k = 0; k < rungs; ++k) update(k);
  }
  for (std::size_t k = 0; k < rungs; ++k) {
    if (failures[k]) {
      try {
        std::rethrow_exception(failures[k]);
      } catch (const Error& e) {
        throw Error("rung " + std::to_string(k) + ": " + e.what());
      }
    }
    ensemble.positions[k] = std::move(moves[k].position);
    // rho = 1 leaves the value untouched; otherwise recompute rather than divide.
    ensemble.log_density[k] =
        ladder[k] == 1.0 ? moves[k].log_density : target.log_density(ensemble.positions[k]);
  }

  // Phase B: serial exchanges between neighbours.
  if (rungs > 1) {
    for (std::size_t i = 0; i < options.exchanges; ++i) {
      const std::size_t k = rng.index(rungs - 1);
      const double log_ratio =
          swap_log_ratio(ladder[k], ladder[k + 1], ensemble.log_density[k], ensemble.log_density[k + 1]);
      ++ensemble.swap_attempts[k];
      if (rng.uniform() < std::exp(std::min(0.0, log_ratio))) {
        std::swap(ensemble.positions[k], ensemble.positions[k + 1]);
        std::swap(ensemble.log_density[k], ensemble.log_density[k + 1]);
        ++ensemble.swap_accepts[k];
      }
    }
  }

  Transition cold = moves.back();
  cold.position = ensemble.positions.back();
  cold.log_density = ensemble.log_density.back();
  ensemble.cold_trace.push(cold);
}

EnsembleState run_parallel_tempering(const KernelKind& kernel, const TargetDensity& target,
                                     const TemperatureLadder& ladder, const Vector& x_init,
                                     std::size_t sweeps, const PtOptions& options, Rng& rng) {
  EnsembleState ensemble = make_ensemble(target, ladder, x_init, rng);
  const std::vector<KernelKind> kernels(ladder.size(), kernel);
  ensemble.cold_trace.samples.reserve(sweeps);
  for (std::size_t s = 0; s < sweeps; ++s) {
    try {
      pt_sweep(ensemble, target, ladder, kernels, options, rng);
    } catch (const ChainError&) {
      throw;
    } catch (const Error& e) {
      throw ChainError(s, e.what());
    }
  }
  return ensemble;
}

}  // namespace geomc
