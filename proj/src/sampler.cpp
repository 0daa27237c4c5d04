#include "geomc/sampler.hpp"

#include <cmath>
#include <limits>

#include "geomc/errors.hpp"

namespace geomc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector finite_gradient(const TargetDensity& target, const Vector& x) {
  Vector g = target.gradient(x);
  if (!g.allFinite()) throw DivergenceError("non-finite gradient");
  return g;
}

// v <- Proj_x(v + eps_b/2 * g_b) blockwise.
void half_kick(const Manifold& m, const std::vector<Block>& blocks,
               std::span<const double> epsilon, const Vector& x, const Vector& g, Vector& v) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    v.segment(blocks[b].offset, blocks[b].size) +=
        (0.5 * epsilon[b]) * g.segment(blocks[b].offset, blocks[b].size);
  }
  v = m.tangent_project(x, v);
  if (!v.allFinite()) throw DivergenceError("non-finite velocity");
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  const double u = rng.uniform();
  return std::isfinite(log_ratio) ? u < std::exp(log_ratio) : log_ratio > 0.0;
}

void require_finite_start(double lp) {
  if (!std::isfinite(lp)) throw DomainError("transition: start point has non-finite log-density");
}

}  // namespace

void ChainTrace::push(const Transition& t) {
  samples.push_back(t.position);
  accepted.push_back(t.accepted);
  delta_h.push_back(t.delta_h);
  log_density.push_back(t.log_density);
}

double ChainTrace::acceptance_rate() const {
  if (accepted.empty()) return 0.0;
  std::size_t n = 0;
  for (bool a : accepted) n += a;
  return static_cast<double>(n) / static_cast<double>(accepted.size());
}

std::vector<double> block_step_sizes(const Manifold& m, std::span<const double> epsilon) {
  const std::size_t blocks = m.blocks().size();
  std::vector<double> out;
  if (epsilon.size() == 1) {
    out.assign(blocks, epsilon[0]);
  } else if (epsilon.size() == blocks) {
    out.assign(epsilon.begin(), epsilon.end());
  } else {
    throw DimensionError("step sizes: got " + std::to_string(epsilon.size()) + " values for " +
                         std::to_string(blocks) + " blocks");
  }
  for (double e : out) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("step sizes must be positive");
  }
  return out;
}

PhasePoint integrator_step(const TargetDensity& target, const PhasePoint& s,
                           std::span<const double> epsilon) {
  return integrate(target, s, epsilon, 1);
}

PhasePoint integrate(const TargetDensity& target, const PhasePoint& s,
                     std::span<const double> epsilon, std::size_t steps) {
  const Manifold& m = target.manifold();
  const auto eps = block_step_sizes(m, epsilon);
  const auto blocks = m.blocks();

  PhasePoint state = s;
  Vector g = finite_gradient(target, state.position);
  for (std::size_t step = 0; step < steps; ++step) {
    half_kick(m, blocks, eps, state.position, g, state.velocity);
    state = m.geodesic_flow(state, eps);
    g = finite_gradient(target, state.position);
    half_kick(m, blocks, eps, state.position, g, state.velocity);
  }
  return state;
}

Transition hmc_transition(const TargetDensity& target, const Vector& x0, double log_density0,
                          const HmcConfig& cfg, Rng& rng) {
  require_finite_start(log_density0);
  if (cfg.steps < 1) throw DomainError("hmc_transition: steps must be at least 1");
  const Manifold& m = target.manifold();

  const Vector v0 = m.sample_velocity(x0, rng);
  const double h0 = log_density0 - 0.5 * v0.squaredNorm();

  PhasePoint proposal;
  double proposal_lp = -kInf;
  double h1 = -kInf;
  try {
    proposal = integrate(target, {x0, v0}, cfg.epsilon, cfg.steps);
    proposal_lp = target.log_density(proposal.position);
    h1 = proposal_lp - 0.5 * proposal.velocity.squaredNorm();
  } catch (const DivergenceError&) {
    h1 = -kInf;
  }
  if (std::isnan(h1)) h1 = -kInf;

  const bool accept = metropolis_accept(h1 - h0, rng) && std::isfinite(h1);
  const double delta_h = h0 - h1;
  if (accept) return {std::move(proposal.position), true, delta_h, proposal_lp};
  return {x0, false, delta_h, log_density0};
}

Transition hmc_transition(const TargetDensity& target, const Vector& x0, const HmcConfig& cfg,
                          Rng& rng) {
  return hmc_transition(target, x0, target.log_density(x0), cfg, rng);
}

Transition rwmh_simplex_transition(const TargetDensity& target, const Vector& x0,
                                   double log_density0, double epsilon, Rng& rng) {
  require_finite_start(log_density0);
  if (!(epsilon > 0.0)) throw DomainError("rwmh_simplex_transition: epsilon must be positive");
  const Vector z = rng.normal_vector(x0.size());
  // (I - n n^T) z with n = 1/sqrt(d).
  const Vector proposal = x0 + epsilon * (z.array() - z.mean()).matrix();

  double proposal_lp = -kInf;
  if (proposal.minCoeff() > 0.0) proposal_lp = target.log_density(proposal);
  const double log_ratio = proposal_lp - log_density0;
  const bool accept = metropolis_accept(log_ratio, rng) && std::isfinite(proposal_lp);
  if (accept) return {proposal, true, -log_ratio, proposal_lp};
  return {x0, false, -log_ratio, log_density0};
}

Transition rwmh_simplex_transition(const TargetDensity& target, const Vector& x0, double epsilon,
                                   Rng& rng) {
  return rwmh_simplex_transition(target, x0, target.log_density(x0), epsilon, rng);
}

Vector spherical_rw_proposal(const Vector& x, const Vector& delta) {
  const double len = delta.norm();
  if (len == 0.0) return x;
  Vector out = std::cos(len) * x + (std::sin(len) / len) * delta;
  return out / out.norm();
}

Transition spherical_rw_transition(const TargetDensity& target, const Vector& x0,
                                   double log_density0, double epsilon, Rng& rng) {
  require_finite_start(log_density0);
  if (!(epsilon > 0.0)) throw DomainError("spherical_rw_transition: epsilon must be positive");
  const Manifold& m = target.manifold();
  const Vector delta = epsilon * m.tangent_project(x0, rng.normal_vector(x0.size()));
  const Vector proposal = spherical_rw_proposal(x0, delta);

  const double proposal_lp = target.log_density(proposal);
  const double log_ratio = proposal_lp - log_density0;
  const bool accept = metropolis_accept(log_ratio, rng) && std::isfinite(proposal_lp);
  if (accept) return {proposal, true, -log_ratio, proposal_lp};
  return {x0, false, -log_ratio, log_density0};
}

Transition spherical_rw_transition(const TargetDensity& target, const Vector& x0, double epsilon,
                                   Rng& rng) {
  return spherical_rw_transition(target, x0, target.log_density(x0), epsilon, rng);
}

Transition transition(const KernelKind& kernel, const TargetDensity& target, const Vector& x0,
                      double log_density0, Rng& rng) {
  if (const auto* hmc = std::get_if<GeodesicHmc>(&kernel)) {
    return hmc_transition(target, x0, log_density0, hmc->config, rng);
  }
  if (const auto* rw = std::get_if<RwMetropolisSimplex>(&kernel)) {
    if (!std::holds_alternative<manifolds::ReflectiveSimplex>(target.manifold().kind())) {
      throw DomainError("simplex random walk needs a target on the simplex");
    }
    return rwmh_simplex_transition(target, x0, log_density0, rw->epsilon, rng);
  }
  const auto& srw = std::get<SphericalRandomWalk>(kernel);
  if (!std::holds_alternative<manifolds::Sphere>(target.manifold().kind())) {
    throw DomainError("spherical random walk needs a target on the sphere");
  }
  return spherical_rw_transition(target, x0, log_density0, srw.epsilon, rng);
}

ChainTrace run_chain(const KernelKind& kernel, const TargetDensity& target, const Vector& x_init,
                     std::size_t n_samples, Rng& rng) {
  ChainTrace trace;
  if (n_samples == 0) return trace;
  target.manifold().require_member(x_init);
  trace.samples.reserve(n_samples);

  Vector x = x_init;
  double lp = target.log_density(x);
  for (std::size_t step = 0; step < n_samples; ++step) {
    try {
      Transition t = transition(kernel, target, x, lp, rng);
      x = t.position;
      lp = t.log_density;
      trace.push(t);
    } catch (const ChainError&) {
      throw;
    } catch (const Error& e) {
      throw ChainError(step, e.what());
    }
  }
  return trace;
}

}  // namespace geomc
