#ifndef GEOMC_SAMPLER_HPP
#define GEOMC_SAMPLER_HPP

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "geomc/linalg.hpp"
#include "geomc/manifold.hpp"
#include "geomc/rng.hpp"
#include "geomc/targets.hpp"

namespace geomc {

/// Geodesic HMC settings. `epsilon` holds either one step size shared by all
/// blocks or one per top-level product component.
struct HmcConfig {
  std::vector<double> epsilon{0.01};
  std::size_t steps = 20;

  friend bool operator==(const HmcConfig&, const HmcConfig&) = default;
};

struct GeodesicHmc {
  HmcConfig config;
};

/// Random-walk Metropolis on the simplex with in-plane Gaussian proposals.
struct RwMetropolisSimplex {
  double epsilon = 0.01;
};

/// Random walk along great circles of the sphere.
struct SphericalRandomWalk {
  double epsilon = 0.01;
};

using KernelKind = std::variant<GeodesicHmc, RwMetropolisSimplex, SphericalRandomWalk>;

/// Outcome of one Markov transition. `delta_h` is the energy error
/// H(proposal) - H(start) (for random walks, the drop in log-density);
/// `log_density` belongs to the returned position.
struct Transition {
  Vector position;
  bool accepted = false;
  double delta_h = 0.0;
  double log_density = 0.0;
};

struct ChainTrace {
  std::vector<Vector> samples;
  std::vector<bool> accepted;
  std::vector<double> delta_h;
  std::vector<double> log_density;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  void push(const Transition& t);
  double acceptance_rate() const;

  friend bool operator==(const ChainTrace&, const ChainTrace&) = default;
};

/// Per-block step sizes for m: broadcasts a single value, validates the rest.
std::vector<double> block_step_sizes(const Manifold& m, std::span<const double> epsilon);

/// One step of the split integrator: half kick with the gradient and tangent
/// projection, geodesic (or reflective) flow for epsilon, half kick and
/// projection again. Each product block uses its own epsilon.
PhasePoint integrator_step(const TargetDensity& target, const PhasePoint& s,
                           std::span<const double> epsilon);

/// `steps` chained integrator steps, evaluating the gradient once per step.
PhasePoint integrate(const TargetDensity& target, const PhasePoint& s,
                     std::span<const double> epsilon, std::size_t steps);

/// Geodesic Monte Carlo transition from x0. `log_density0` must equal
/// target.log_density(x0) and be finite. Divergent trajectories are rejected.
Transition hmc_transition(const TargetDensity& target, const Vector& x0, double log_density0,
                          const HmcConfig& cfg, Rng& rng);
Transition hmc_transition(const TargetDensity& target, const Vector& x0, const HmcConfig& cfg,
                          Rng& rng);

Transition rwmh_simplex_transition(const TargetDensity& target, const Vector& x0,
                                   double log_density0, double epsilon, Rng& rng);
Transition rwmh_simplex_transition(const TargetDensity& target, const Vector& x0, double epsilon,
                                   Rng& rng);

/// Proposal x cos|delta| + (delta/|delta|) sin|delta| with
/// delta ~ N(0, eps^2 (I - x x^T)), accepted by the plain Metropolis ratio.
Vector spherical_rw_proposal(const Vector& x, const Vector& delta);
Transition spherical_rw_transition(const TargetDensity& target, const Vector& x0,
                                   double log_density0, double epsilon, Rng& rng);
Transition spherical_rw_transition(const TargetDensity& target, const Vector& x0, double epsilon,
                                   Rng& rng);

/// Dispatch on the kernel kind.
Transition transition(const KernelKind& kernel, const TargetDensity& target, const Vector& x0,
                      double log_density0, Rng& rng);

/// Applies the kernel n_samples times from x_init and records every state.
/// Library errors are rethrown as ChainError carrying the step index.
ChainTrace run_chain(const KernelKind& kernel, const TargetDensity& target, const Vector& x_init,
                     std::size_t n_samples, Rng& rng);

}  // namespace geomc

#endif  // GEOMC_SAMPLER_HPP
