#include "geomc/targets.hpp"

#include <cmath>
#include <limits>

#include "geomc/errors.hpp"

namespace geomc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_size(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(x.size()));
  }
}

void check_matches(const std::vector<MatchRecord>& matches, Eigen::Index d, const char* what) {
  for (const auto& m : matches) {
    for (auto i : m.winners) {
      if (static_cast<Eigen::Index>(i) >= d) throw DimensionError(std::string(what) + ": player index out of range");
    }
    for (auto i : m.losers) {
      if (static_cast<Eigen::Index>(i) >= d) throw DimensionError(std::string(what) + ": player index out of range");
    }
  }
}

// Match likelihood in terms of per-player weights w (x^2 on the sphere,
// theta on the simplex).
double match_log_likelihood(const Vector& w, const std::vector<MatchRecord>& matches) {
  double total = 0.0;
  for (const auto& m : matches) {
    double win = 0.0;
    for (auto i : m.winners) win += w[static_cast<Eigen::Index>(i)];
    double all = win;
    for (auto i : m.losers) all += w[static_cast<Eigen::Index>(i)];
    if (all <= 0.0 || win <= 0.0) return kNegInf;
    total += std::log(win) - std::log(all);
  }
  return total;
}

// d/dw of match_log_likelihood.
Vector match_weight_gradient(const Vector& w, const std::vector<MatchRecord>& matches) {
  Vector g = Vector::Zero(w.size());
  for (const auto& m : matches) {
    double win = 0.0;
    for (auto i : m.winners) win += w[static_cast<Eigen::Index>(i)];
    double all = win;
    for (auto i : m.losers) all += w[static_cast<Eigen::Index>(i)];
    if (all <= 0.0 || win <= 0.0) {
      throw DomainError("volleyball gradient: match with zero team weight");
    }
    for (auto i : m.winners) g[static_cast<Eigen::Index>(i)] += 1.0 / win;
    for (auto i : m.winners) g[static_cast<Eigen::Index>(i)] -= 1.0 / all;
    for (auto i : m.losers) g[static_cast<Eigen::Index>(i)] -= 1.0 / all;
  }
  return g;
}

}  // namespace

TargetDensity::TargetDensity(Manifold manifold, LogDensityFn log_density, GradientFn gradient,
                             std::string name)
    : manifold_(std::move(manifold)),
      log_density_(std::move(log_density)),
      gradient_(std::move(gradient)),
      name_(std::move(name)) {}

BvmfParams::BvmfParams(Vector c, const Matrix& a) : c_(std::move(c)) {
  if (a.rows() != a.cols() || a.rows() != c_.size()) {
    throw DimensionError("BvmfParams: A must be square with the dimension of c");
  }
  if (!a.allFinite() || !c_.allFinite()) throw DomainError("BvmfParams: non-finite parameter");
  const double asym = (a - a.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, a.norm())) {
    throw DomainError("BvmfParams: A is not symmetric");
  }
  a_ = 0.5 * (a + a.transpose());
}

DirichletParams::DirichletParams(Vector alpha_in) : alpha(std::move(alpha_in)) {
  if (alpha.size() < 1) throw DimensionError("DirichletParams: empty alpha");
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
      throw DomainError("DirichletParams: alpha entries must be positive and finite");
    }
  }
}

double vmf_log_density(const Vector& x, const VmfParams& p) {
  require_size(x, p.c.size(), "vmf_log_density");
  return p.c.dot(x);
}

Vector vmf_gradient(const Vector& x, const VmfParams& p) {
  require_size(x, p.c.size(), "vmf_gradient");
  return p.c;
}

double bvmf_log_density(const Vector& x, const BvmfParams& p) {
  require_size(x, p.c().size(), "bvmf_log_density");
  return p.c().dot(x) + x.dot(p.a() * x);
}

Vector bvmf_gradient(const Vector& x, const BvmfParams& p) {
  require_size(x, p.c().size(), "bvmf_gradient");
  return p.c() + 2.0 * (p.a() * x);
}

double dirichlet_sphere_log_density(const Vector& x, const DirichletParams& p) {
  require_size(x, p.alpha.size(), "dirichlet_sphere_log_density");
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double power = 2.0 * p.alpha[i] - 1.0;
    if (power == 0.0) continue;
    if (x[i] == 0.0) return kNegInf;
    total += power * std::log(std::abs(x[i]));
  }
  return total;
}

Vector dirichlet_sphere_gradient(const Vector& x, const DirichletParams& p) {
  require_size(x, p.alpha.size(), "dirichlet_sphere_gradient");
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double power = 2.0 * p.alpha[i] - 1.0;
    if (power == 0.0) {
      g[i] = 0.0;
      continue;
    }
    if (x[i] == 0.0) throw DomainError("dirichlet_sphere_gradient: zero coordinate");
    g[i] = power / x[i];
  }
  return g;
}

double dirichlet_simplex_log_density(const Vector& theta, const DirichletParams& p) {
  require_size(theta, p.alpha.size(), "dirichlet_simplex_log_density");
  double total = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (theta[i] < 0.0) return kNegInf;
    const double power = p.alpha[i] - 1.0;
    if (power == 0.0) continue;
    if (theta[i] == 0.0) return kNegInf;
    total += power * std::log(theta[i]);
  }
  return total;
}

Vector dirichlet_simplex_gradient(const Vector& theta, const DirichletParams& p) {
  require_size(theta, p.alpha.size(), "dirichlet_simplex_gradient");
  Vector g(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double power = p.alpha[i] - 1.0;
    if (theta[i] < 0.0) throw DomainError("dirichlet_simplex_gradient: outside the simplex");
    if (power == 0.0) {
      g[i] = 0.0;
      continue;
    }
    if (theta[i] == 0.0) throw DomainError("dirichlet_simplex_gradient: boundary point");
    g[i] = power / theta[i];
  }
  return g;
}

double volleyball_log_posterior(const Vector& x, const std::vector<MatchRecord>& matches,
                                const DirichletParams& p) {
  const double prior = dirichlet_sphere_log_density(x, p);
  if (prior == kNegInf) return prior;
  check_matches(matches, x.size(), "volleyball_log_posterior");
  return prior + match_log_likelihood(x.array().square().matrix(), matches);
}

Vector volleyball_gradient(const Vector& x, const std::vector<MatchRecord>& matches,
                           const DirichletParams& p) {
  Vector g = dirichlet_sphere_gradient(x, p);
  check_matches(matches, x.size(), "volleyball_gradient");
  // Chain rule through w = x^2.
  g.array() += 2.0 * x.array() * match_weight_gradient(x.array().square().matrix(), matches).array();
  return g;
}

double volleyball_simplex_log_posterior(const Vector& theta,
                                        const std::vector<MatchRecord>& matches,
                                        const DirichletParams& p) {
  const double prior = dirichlet_simplex_log_density(theta, p);
  if (prior == kNegInf) return prior;
  check_matches(matches, theta.size(), "volleyball_simplex_log_posterior");
  return prior + match_log_likelihood(theta, matches);
}

Vector volleyball_simplex_gradient(const Vector& theta, const std::vector<MatchRecord>& matches,
                                   const DirichletParams& p) {
  check_matches(matches, theta.size(), "volleyball_simplex_gradient");
  return dirichlet_simplex_gradient(theta, p) + match_weight_gradient(theta, matches);
}

TargetDensity make_vmf_target(VmfParams p) {
  const auto d = p.c.size();
  return TargetDensity(
      Manifold::sphere(d), [p](const Vector& x) { return vmf_log_density(x, p); },
      [p](const Vector& x) { return vmf_gradient(x, p); }, "vmf");
}

TargetDensity make_bvmf_target(BvmfParams p) {
  const auto d = p.c().size();
  return TargetDensity(
      Manifold::sphere(d), [p](const Vector& x) { return bvmf_log_density(x, p); },
      [p](const Vector& x) { return bvmf_gradient(x, p); }, "bvmf");
}

TargetDensity make_dirichlet_sphere_target(DirichletParams p) {
  const auto d = p.alpha.size();
  return TargetDensity(
      Manifold::sphere(d), [p](const Vector& x) { return dirichlet_sphere_log_density(x, p); },
      [p](const Vector& x) { return dirichlet_sphere_gradient(x, p); }, "dirichlet-sphere");
}

TargetDensity make_dirichlet_simplex_target(DirichletParams p) {
  const auto d = p.alpha.size();
  return TargetDensity(
      Manifold::simplex(d), [p](const Vector& x) { return dirichlet_simplex_log_density(x, p); },
      [p](const Vector& x) { return dirichlet_simplex_gradient(x, p); }, "dirichlet-simplex");
}

TargetDensity make_volleyball_target(std::vector<MatchRecord> matches, DirichletParams p) {
  const auto d = p.alpha.size();
  check_matches(matches, d, "make_volleyball_target");
  return TargetDensity(
      Manifold::sphere(d),
      [matches, p](const Vector& x) { return volleyball_log_posterior(x, matches, p); },
      [matches, p](const Vector& x) { return volleyball_gradient(x, matches, p); },
      "volleyball-sphere");
}

TargetDensity make_volleyball_simplex_target(std::vector<MatchRecord> matches,
                                             DirichletParams p) {
  const auto d = p.alpha.size();
  check_matches(matches, d, "make_volleyball_simplex_target");
  return TargetDensity(
      Manifold::simplex(d),
      [matches, p](const Vector& x) { return volleyball_simplex_log_posterior(x, matches, p); },
      [matches, p](const Vector& x) { return volleyball_simplex_gradient(x, matches, p); },
      "volleyball-simplex");
}

TargetDensity make_gaussian_target(Vector mean) {
  const auto n = mean.size();
  return TargetDensity(
      Manifold::euclidean(n),
      [mean](const Vector& x) { return -0.5 * (x - mean).squaredNorm(); },
      [mean](const Vector& x) -> Vector { return mean - x; }, "gaussian");
}

TargetDensity make_uniform_target(Manifold m) {
  const auto n = m.ambient_dim();
  return TargetDensity(
      std::move(m), [](const Vector&) { return 0.0; },
      [n](const Vector&) -> Vector { return Vector::Zero(n); }, "uniform");
}

}  // namespace geomc
