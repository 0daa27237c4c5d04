#ifndef GEOMC_EIGENMODEL_HPP
#define GEOMC_EIGENMODEL_HPP

#include <cstdint>

#include "geomc/linalg.hpp"
#include "geomc/rng.hpp"
#include "geomc/targets.hpp"

namespace geomc {

/// Observed network in signed form: ystar(i, j) = +1 for an edge, -1 for an
/// observed non-edge, 0 for unobserved pairs and the diagonal.
struct EigenmodelData {
  /// Throws DomainError unless ystar is square, symmetric, {-1, 0, 1}-valued
  /// with a zero diagonal.
  explicit EigenmodelData(Matrix ystar_in);

  Eigen::Index nodes() const noexcept { return ystar.rows(); }
  /// Number of pairs i < j with a non-zero entry.
  std::size_t observed_pairs() const;
  /// Fraction of observed pairs that are edges.
  double edge_fraction() const;

  Matrix ystar;
};

/// Probit eigenmodel parameters: U on the Stiefel manifold V_{m,p},
/// diagonal Lambda and intercept c.
struct EigenmodelState {
  Matrix u;
  Vector lambda;
  double c = 0.0;

  /// U Lambda U^T + c (the diagonal is included but never used).
  Matrix linear_predictor() const;
};

struct EigenmodelGradient {
  Matrix u;
  Vector lambda;
  double c = 0.0;
};

/// sum_{i<j} log Phi(Y*_ij eta_ij) - sum_r Lambda_rr^2 / (2m) - c^2 / 200.
double eigenmodel_log_posterior(const EigenmodelState& s, const EigenmodelData& d);
EigenmodelGradient eigenmodel_gradients(const EigenmodelState& s, const EigenmodelData& d);

/// Ambient layout on Stiefel(m, p) x R^p x R: column-stacked U, then Lambda,
/// then c.
Vector pack_eigenmodel(const EigenmodelState& s);
EigenmodelState unpack_eigenmodel(const Vector& x, Eigen::Index m, Eigen::Index p);
Manifold eigenmodel_manifold(Eigen::Index m, Eigen::Index p);

TargetDensity make_eigenmodel_target(EigenmodelData data, Eigen::Index p);

/// Default starting point: first p columns of the identity, Lambda = 0 and
/// c = Phi^{-1}(edge fraction).
EigenmodelState eigenmodel_initial_state(const EigenmodelData& data, Eigen::Index p);

/// Planted model and the network drawn from it through the probit link; every
/// pair is observed.
struct PlantedEigenmodel {
  EigenmodelState truth;
  EigenmodelData data;
};

PlantedEigenmodel make_planted_eigenmodel(Eigen::Index m, const Vector& lambda, double c,
                                          Rng& rng);

}  // namespace geomc

#endif  // GEOMC_EIGENMODEL_HPP
