#include "geomc/eigenmodel.hpp"

#include <algorithm>
#include <cmath>

#include "geomc/errors.hpp"
#include "geomc/probit.hpp"

namespace geomc {

namespace {

void check_state(const EigenmodelState& s, const EigenmodelData& d) {
  if (s.u.rows() != d.nodes() || s.u.cols() != s.lambda.size() || s.u.cols() < 1) {
    throw DimensionError("eigenmodel: U must be m x p with p = length of Lambda");
  }
}

// Symmetric matrix of d log pi / d eta_ij over observed pairs, zero elsewhere.
Matrix predictor_gradient(const Matrix& eta, const Matrix& ystar) {
  const Eigen::Index m = eta.rows();
  Matrix g = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double y = ystar(i, j);
      if (y == 0.0) continue;
      const double value = y * probit_ratio(y * eta(i, j));
      g(i, j) = value;
      g(j, i) = value;
    }
  }
  return g;
}

}  // namespace

EigenmodelData::EigenmodelData(Matrix ystar_in) : ystar(std::move(ystar_in)) {
  if (ystar.rows() != ystar.cols() || ystar.rows() < 2) {
    throw DimensionError("EigenmodelData: Y* must be square with at least two nodes");
  }
  for (Eigen::Index i = 0; i < ystar.rows(); ++i) {
    if (ystar(i, i) != 0.0) throw DomainError("EigenmodelData: Y* diagonal must be zero");
    for (Eigen::Index j = 0; j < ystar.cols(); ++j) {
      const double y = ystar(i, j);
      if (y != -1.0 && y != 0.0 && y != 1.0) {
        throw DomainError("EigenmodelData: Y* entries must be -1, 0 or 1");
      }
      if (y != ystar(j, i)) throw DomainError("EigenmodelData: Y* must be symmetric");
    }
  }
}

std::size_t EigenmodelData::observed_pairs() const {
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < nodes(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) count += ystar(i, j) != 0.0;
  }
  return count;
}

double EigenmodelData::edge_fraction() const {
  std::size_t edges = 0;
  for (Eigen::Index j = 0; j < nodes(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) edges += ystar(i, j) == 1.0;
  }
  const auto observed = observed_pairs();
  return observed == 0 ? 0.5 : static_cast<double>(edges) / static_cast<double>(observed);
}

Matrix EigenmodelState::linear_predictor() const {
  Matrix eta = u * lambda.asDiagonal() * u.transpose();
  eta.array() += c;
  return eta;
}

double eigenmodel_log_posterior(const EigenmodelState& s, const EigenmodelData& d) {
  check_state(s, d);
  const Matrix eta = s.linear_predictor();
  const Eigen::Index m = d.nodes();
  double total = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double y = d.ystar(i, j);
      if (y != 0.0) total += log_probit(y * eta(i, j));
    }
  }
  total -= s.lambda.squaredNorm() / (2.0 * static_cast<double>(m));
  total -= s.c * s.c / 200.0;
  return total;
}

EigenmodelGradient eigenmodel_gradients(const EigenmodelState& s, const EigenmodelData& d) {
  check_state(s, d);
  const Matrix g = predictor_gradient(s.linear_predictor(), d.ystar);
  const double m = static_cast<double>(d.nodes());
  EigenmodelGradient out;
  out.u = (g * s.u) * s.lambda.asDiagonal();
  // Pair sums over i < j are half the full symmetric sums.
  out.lambda = 0.5 * (s.u.transpose() * g * s.u).diagonal() - s.lambda / m;
  out.c = 0.5 * g.sum() - s.c / 100.0;
  return out;
}

Vector pack_eigenmodel(const EigenmodelState& s) {
  const Eigen::Index up = s.u.size();
  Vector x(up + s.lambda.size() + 1);
  x.head(up) = Eigen::Map<const Vector>(s.u.data(), up);
  x.segment(up, s.lambda.size()) = s.lambda;
  x[x.size() - 1] = s.c;
  return x;
}

EigenmodelState unpack_eigenmodel(const Vector& x, Eigen::Index m, Eigen::Index p) {
  if (x.size() != m * p + p + 1) throw DimensionError("unpack_eigenmodel: wrong vector length");
  EigenmodelState s;
  s.u = Eigen::Map<const Matrix>(x.data(), m, p);
  s.lambda = x.segment(m * p, p);
  s.c = x[x.size() - 1];
  return s;
}

Manifold eigenmodel_manifold(Eigen::Index m, Eigen::Index p) {
  return Manifold::product(
      {Manifold::stiefel(m, p), Manifold::euclidean(p), Manifold::euclidean(1)});
}

TargetDensity make_eigenmodel_target(EigenmodelData data, Eigen::Index p) {
  const Eigen::Index m = data.nodes();
  if (p < 1 || p > m) throw DimensionError("make_eigenmodel_target: need 1 <= p <= m");
  return TargetDensity(
      eigenmodel_manifold(m, p),
      [data, m, p](const Vector& x) {
        return eigenmodel_log_posterior(unpack_eigenmodel(x, m, p), data);
      },
      [data, m, p](const Vector& x) {
        const auto g = eigenmodel_gradients(unpack_eigenmodel(x, m, p), data);
        return pack_eigenmodel({g.u, g.lambda, g.c});
      },
      "eigenmodel");
}

EigenmodelState eigenmodel_initial_state(const EigenmodelData& data, Eigen::Index p) {
  EigenmodelState s;
  s.u = Matrix::Identity(data.nodes(), p);
  s.lambda = Vector::Zero(p);
  const double frac = std::clamp(data.edge_fraction(), 1e-6, 1.0 - 1e-6);
  s.c = normal_quantile(frac);
  return s;
}

PlantedEigenmodel make_planted_eigenmodel(Eigen::Index m, const Vector& lambda, double c,
                                          Rng& rng) {
  const Eigen::Index p = lambda.size();
  if (p < 1 || p > m) throw DimensionError("make_planted_eigenmodel: need 1 <= p <= m");
  Matrix raw(m, p);
  for (Eigen::Index j = 0; j < p; ++j) raw.col(j) = rng.normal_vector(m);
  EigenmodelState truth{orthonormalize(raw), lambda, c};

  const Matrix eta = truth.linear_predictor();
  Matrix ystar = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double y = rng.uniform() < normal_cdf(eta(i, j)) ? 1.0 : -1.0;
      ystar(i, j) = y;
      ystar(j, i) = y;
    }
  }
  return {std::move(truth), EigenmodelData(std::move(ystar))};
}

}  // namespace geomc
