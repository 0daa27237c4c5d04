#ifndef GEOMC_TARGETS_HPP
#define GEOMC_TARGETS_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "geomc/linalg.hpp"
#include "geomc/manifold.hpp"

namespace geomc {

/// Unnormalised log-density with respect to the Hausdorff measure of a
/// manifold, together with its ambient gradient. Log-densities may return
/// -infinity (zero density); gradients at such points throw DomainError.
class TargetDensity {
 public:
  using LogDensityFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  TargetDensity(Manifold manifold, LogDensityFn log_density, GradientFn gradient,
                std::string name);

  double log_density(const Vector& x) const { return log_density_(x); }
  Vector gradient(const Vector& x) const { return gradient_(x); }
  const Manifold& manifold() const noexcept { return manifold_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Manifold manifold_;
  LogDensityFn log_density_;
  GradientFn gradient_;
  std::string name_;
};

/// von Mises-Fisher: density proportional to exp(c^T x), with c = kappa * mu.
struct VmfParams {
  Vector c;
};

/// Bingham-von Mises-Fisher: density proportional to exp(c^T x + x^T A x).
class BvmfParams {
 public:
  /// Stores (A + A^T)/2. Throws DomainError if A is visibly asymmetric
  /// (relative asymmetry above 1e-10) and DimensionError on shape mismatch.
  BvmfParams(Vector c, const Matrix& a);

  const Vector& c() const noexcept { return c_; }
  const Matrix& a() const noexcept { return a_; }

 private:
  Vector c_;
  Matrix a_;
};

struct DirichletParams {
  /// Throws DomainError unless every entry is positive and finite.
  explicit DirichletParams(Vector alpha_in);
  Vector alpha;
};

/// One match: team `winners` beat team `losers`. Player indices are 0-based
/// here; text fixtures use 1-based indices.
struct MatchRecord {
  std::vector<std::size_t> winners;
  std::vector<std::size_t> losers;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

double vmf_log_density(const Vector& x, const VmfParams& p);
Vector vmf_gradient(const Vector& x, const VmfParams& p);

double bvmf_log_density(const Vector& x, const BvmfParams& p);
Vector bvmf_gradient(const Vector& x, const BvmfParams& p);

/// sum_i (2 alpha_i - 1) log|x_i|: the Dirichlet law carried to the sphere by
/// theta = x^2 and extended to every orthant by reflection.
double dirichlet_sphere_log_density(const Vector& x, const DirichletParams& p);
Vector dirichlet_sphere_gradient(const Vector& x, const DirichletParams& p);

/// sum_i (alpha_i - 1) log theta_i on the simplex. Points outside the closed
/// simplex, and boundary points with alpha_i != 1, give -infinity.
double dirichlet_simplex_log_density(const Vector& theta, const DirichletParams& p);
Vector dirichlet_simplex_gradient(const Vector& theta, const DirichletParams& p);

/// Team-strength posterior on the sphere: Dirichlet prior plus, per match,
/// log(sum_W x_t^2) - log(sum_{W u L} x_t^2).
double volleyball_log_posterior(const Vector& x, const std::vector<MatchRecord>& matches,
                                const DirichletParams& p);
Vector volleyball_gradient(const Vector& x, const std::vector<MatchRecord>& matches,
                           const DirichletParams& p);

/// Same posterior in simplex coordinates theta (Lebesgue density).
double volleyball_simplex_log_posterior(const Vector& theta,
                                        const std::vector<MatchRecord>& matches,
                                        const DirichletParams& p);
Vector volleyball_simplex_gradient(const Vector& theta, const std::vector<MatchRecord>& matches,
                                   const DirichletParams& p);

TargetDensity make_vmf_target(VmfParams p);
TargetDensity make_bvmf_target(BvmfParams p);
TargetDensity make_dirichlet_sphere_target(DirichletParams p);
TargetDensity make_dirichlet_simplex_target(DirichletParams p);
TargetDensity make_volleyball_target(std::vector<MatchRecord> matches, DirichletParams p);
TargetDensity make_volleyball_simplex_target(std::vector<MatchRecord> matches,
                                             DirichletParams p);

/// Standard Gaussian with the given mean on R^n; handy for leapfrog checks.
TargetDensity make_gaussian_target(Vector mean);

/// Density uniform with respect to the Hausdorff measure of m.
TargetDensity make_uniform_target(Manifold m);

}  // namespace geomc

#endif  // GEOMC_TARGETS_HPP
