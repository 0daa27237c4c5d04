#ifndef GEOMC_TESTS_SUPPORT_HPP
#define GEOMC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>

#include "geomc/linalg.hpp"
#include "geomc/rng.hpp"

namespace geomc::test {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) m.col(j) = rng.normal_vector(rows);
  return m;
}

inline Matrix random_orthonormal(Eigen::Index d, Eigen::Index p, Rng& rng) {
  return orthonormalize(random_matrix(d, p, rng));
}

inline Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unflatten(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline Vector random_simplex_interior(Eigen::Index d, Rng& rng) {
  Vector g(d);
  for (Eigen::Index i = 0; i < d; ++i) g[i] = -std::log(rng.uniform()) + 0.05;
  return g / g.sum();
}

/// Central differences of f in every ambient coordinate. The step shrinks
/// with |x_i| (down to h/100) so log singularities at 0 stay resolved.
inline Vector finite_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                              double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double hi = h * std::clamp(std::abs(x[i]), 1e-2, 1.0);
    Vector xp = x;
    Vector xm = x;
    xp[i] += hi;
    xm[i] -= hi;
    g[i] = (f(xp) - f(xm)) / (2.0 * hi);
  }
  return g;
}

/// max_i |a_i - b_i| / max(1, |b|_inf)
inline double relative_gap(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

/// exp(M) by a truncated power series.
inline Matrix taylor_exp(const Matrix& m, int terms) {
  Matrix sum = Matrix::Identity(m.rows(), m.cols());
  Matrix term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * m / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

}  // namespace geomc::test

#endif  // GEOMC_TESTS_SUPPORT_HPP
