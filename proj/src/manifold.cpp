#include "geomc/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geomc/errors.hpp"

namespace geomc {

namespace manifolds {

namespace {

Eigen::Map<const Matrix> as_matrix(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(x.data(), rows, cols);
}

Vector as_vector(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix skew_part(const Matrix& a) { return 0.5 * (a - a.transpose()); }

}  // namespace

// Euclidean

double Euclidean::residual(const Vector& x) const {
  return x.allFinite() ? 0.0 : std::numeric_limits<double>::infinity();
}

Vector Euclidean::project(const Vector&, const Vector& u) const { return u; }

void Euclidean::flow(Vector& x, Vector& v, double t) const { x += t * v; }

// Affine subspace

double AffineSubspace::residual(const Vector& x) const {
  return (normal_basis.transpose() * (x - origin)).norm();
}

Vector AffineSubspace::project(const Vector&, const Vector& u) const {
  return project_out_basis(normal_basis, u);
}

void AffineSubspace::flow(Vector& x, Vector& v, double t) const { x += t * v; }

// Sphere

double Sphere::residual(const Vector& x) const { return std::abs(x.norm() - 1.0); }

Vector Sphere::project(const Vector& x, const Vector& u) const { return u - x.dot(u) * x; }

void Sphere::flow(Vector& x, Vector& v, double t) const {
  const double alpha = v.norm();
  if (alpha == 0.0) return;
  const double c = std::cos(alpha * t);
  const double s = std::sin(alpha * t);
  const Vector x0 = x;
  x = c * x0 + (s / alpha) * v;
  v = c * v - (alpha * s) * x0;
}

void Sphere::renormalise(Vector& x, Vector& v) const {
  x /= x.norm();
  v = project(x, v);
}

// Stiefel

double Stiefel::residual(const Vector& x) const {
  return orthonormality_residual(as_matrix(x, d, p));
}

Vector Stiefel::project(const Vector& x, const Vector& u) const {
  const auto xm = as_matrix(x, d, p);
  const auto um = as_matrix(u, d, p);
  const Matrix xtu = xm.transpose() * um;
  return as_vector(um - 0.5 * xm * (xtu + xtu.transpose()));
}

void Stiefel::flow(Vector& x, Vector& v, double t) const {
  const auto xm = as_matrix(x, d, p);
  const auto vm = as_matrix(v, d, p);
  const Matrix a = skew_part(xm.transpose() * vm);
  const Matrix s = vm.transpose() * vm;

  Matrix generator(2 * p, 2 * p);
  generator << a, -s, Matrix::Identity(p, p), a;
  const Matrix e = matrix_exp(t * generator);
  const Matrix rot = matrix_exp(-t * a);

  Matrix stacked(d, 2 * p);
  stacked << xm, vm;
  const Matrix moved = stacked * e;
  const Matrix x_new = moved.leftCols(p) * rot;
  const Matrix v_new = moved.rightCols(p) * rot;
  x = as_vector(x_new);
  v = as_vector(v_new);
}

void Stiefel::renormalise(Vector& x, Vector& v) const {
  x = as_vector(orthonormalize(as_matrix(x, d, p)));
  v = project(x, v);
}

// Orthogonal group

double OrthogonalGroup::residual(const Vector& x) const {
  return orthonormality_residual(as_matrix(x, d, d));
}

Vector OrthogonalGroup::project(const Vector& x, const Vector& u) const {
  return Stiefel{d, d}.project(x, u);
}

void OrthogonalGroup::flow(Vector& x, Vector& v, double t) const {
  const auto xm = as_matrix(x, d, d);
  const auto vm = as_matrix(v, d, d);
  const Matrix rot = matrix_exp(t * skew_part(xm.transpose() * vm));
  const Matrix x_new = xm * rot;
  const Matrix v_new = vm * rot;
  x = as_vector(x_new);
  v = as_vector(v_new);
}

void OrthogonalGroup::renormalise(Vector& x, Vector& v) const {
  Stiefel{d, d}.renormalise(x, v);
}

// Reflective simplex

double ReflectiveSimplex::residual(const Vector& x) const {
  const double below = std::max(0.0, -x.minCoeff());
  return std::max(std::abs(x.sum() - 1.0), below);
}

Vector ReflectiveSimplex::project(const Vector&, const Vector& u) const {
  return u.array() - u.mean();
}

void ReflectiveSimplex::flow(Vector& x, Vector& v, double t) const {
  PhasePoint out = reflective_flow({x, v}, t);
  x = std::move(out.position);
  v = std::move(out.velocity);
}

void ReflectiveSimplex::renormalise(Vector& x, Vector& v) const {
  x.array() -= (x.sum() - 1.0) / static_cast<double>(d);
  v = project(x, v);
}

}  // namespace manifolds

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class K>
concept Renormalisable = requires(const K& k, Vector& x, Vector& v) { k.renormalise(x, v); };

void require_positive(Eigen::Index n, const char* what) {
  if (n < 1) throw DimensionError(std::string(what) + ": dimension must be at least 1");
}

}  // namespace

Manifold Manifold::euclidean(Eigen::Index n) {
  require_positive(n, "euclidean");
  return Manifold(manifolds::Euclidean{n});
}

Manifold Manifold::affine(Vector origin, Matrix normal_basis) {
  require_positive(origin.size(), "affine");
  if (normal_basis.rows() != origin.size()) {
    throw DimensionError("affine: normal basis rows must equal the ambient dimension");
  }
  if (normal_basis.cols() > 0 && orthonormality_residual(normal_basis) > 1e-10) {
    throw DomainError("affine: normal basis columns are not orthonormal");
  }
  return Manifold(manifolds::AffineSubspace{std::move(origin), std::move(normal_basis)});
}

Manifold Manifold::sphere(Eigen::Index d) {
  require_positive(d, "sphere");
  return Manifold(manifolds::Sphere{d});
}

Manifold Manifold::stiefel(Eigen::Index d, Eigen::Index p) {
  require_positive(d, "stiefel");
  require_positive(p, "stiefel");
  if (p > d) throw DimensionError("stiefel: requires p <= d");
  return Manifold(manifolds::Stiefel{d, p});
}

Manifold Manifold::orthogonal(Eigen::Index d) {
  require_positive(d, "orthogonal");
  return Manifold(manifolds::OrthogonalGroup{d});
}

Manifold Manifold::simplex(Eigen::Index d) {
  if (d < 2) throw DimensionError("simplex: requires d >= 2");
  return Manifold(manifolds::ReflectiveSimplex{d});
}

Manifold Manifold::product(std::vector<Manifold> parts) {
  if (parts.empty()) throw DimensionError("product: needs at least one component");
  return Manifold(manifolds::Product{std::move(parts)});
}

std::string Manifold::name() const {
  const auto n = [](Eigen::Index i) { return std::to_string(i); };
  return std::visit(
      Overloaded{
          [&](const manifolds::Euclidean& k) { return "Euclidean(" + n(k.n) + ")"; },
          [&](const manifolds::AffineSubspace& k) {
            return "AffineSubspace(" + n(k.origin.size()) + ", " + n(k.normal_basis.cols()) + ")";
          },
          [&](const manifolds::Sphere& k) { return "Sphere(" + n(k.d) + ")"; },
          [&](const manifolds::Stiefel& k) { return "Stiefel(" + n(k.d) + ", " + n(k.p) + ")"; },
          [&](const manifolds::OrthogonalGroup& k) { return "OrthogonalGroup(" + n(k.d) + ")"; },
          [&](const manifolds::ReflectiveSimplex& k) {
            return "ReflectiveSimplex(" + n(k.d) + ")";
          },
          [&](const manifolds::Product& k) {
            std::string out = "Product(";
            for (std::size_t i = 0; i < k.parts.size(); ++i) {
              if (i > 0) out += " x ";
              out += k.parts[i].name();
            }
            return out + ")";
          },
      },
      kind_);
}

Eigen::Index Manifold::ambient_dim() const {
  return std::visit(Overloaded{
                        [](const manifolds::Euclidean& k) { return k.n; },
                        [](const manifolds::AffineSubspace& k) { return k.origin.size(); },
                        [](const manifolds::Sphere& k) { return k.d; },
                        [](const manifolds::Stiefel& k) { return k.d * k.p; },
                        [](const manifolds::OrthogonalGroup& k) { return k.d * k.d; },
                        [](const manifolds::ReflectiveSimplex& k) { return k.d; },
                        [](const manifolds::Product& k) {
                          Eigen::Index total = 0;
                          for (const auto& part : k.parts) total += part.ambient_dim();
                          return total;
                        },
                    },
                    kind_);
}

std::vector<Block> Manifold::blocks() const {
  if (const auto* prod = std::get_if<manifolds::Product>(&kind_)) {
    std::vector<Block> out;
    Eigen::Index offset = 0;
    for (const auto& part : prod->parts) {
      out.push_back({offset, part.ambient_dim()});
      offset += part.ambient_dim();
    }
    return out;
  }
  return {Block{0, ambient_dim()}};
}

double Manifold::residual(const Vector& x) const {
  if (x.size() != ambient_dim()) {
    throw DimensionError(name() + ": expected ambient dimension " + std::to_string(ambient_dim()) +
                         ", got " + std::to_string(x.size()));
  }
  if (!x.allFinite()) return std::numeric_limits<double>::infinity();
  return std::visit(Overloaded{
                        [&](const manifolds::Product& k) {
                          double worst = 0.0;
                          Eigen::Index offset = 0;
                          for (const auto& part : k.parts) {
                            const Eigen::Index n = part.ambient_dim();
                            worst = std::max(worst, part.residual(x.segment(offset, n)));
                            offset += n;
                          }
                          return worst;
                        },
                        [&](const auto& k) { return k.residual(x); },
                    },
                    kind_);
}

bool Manifold::contains(const Vector& x, double tol) const { return residual(x) <= tol; }

void Manifold::require_member(const Vector& x) const {
  const double r = residual(x);
  if (!(r <= kMembershipTolerance)) {
    throw MembershipError(name() + ": point is off the manifold (residual " + std::to_string(r) +
                          ")");
  }
}

double Manifold::tangent_residual(const Vector& x, const Vector& v) const {
  if (v.size() != x.size()) throw DimensionError(name() + ": velocity dimension mismatch");
  return (v - tangent_project(x, v)).norm();
}

Vector Manifold::tangent_project(const Vector& x, const Vector& u) const {
  require_member(x);
  if (u.size() != x.size()) {
    throw DimensionError(name() + ": vector has length " + std::to_string(u.size()) +
                         ", expected " + std::to_string(x.size()));
  }
  return std::visit(Overloaded{
                        [&](const manifolds::Product& k) {
                          Vector out(u.size());
                          Eigen::Index offset = 0;
                          for (const auto& part : k.parts) {
                            const Eigen::Index n = part.ambient_dim();
                            out.segment(offset, n) = part.tangent_project(x.segment(offset, n),
                                                                          u.segment(offset, n));
                            offset += n;
                          }
                          return out;
                        },
                        [&](const auto& k) { return k.project(x, u); },
                    },
                    kind_);
}

PhasePoint Manifold::geodesic_flow(const PhasePoint& s, double t) const {
  const std::vector<double> durations(blocks().size(), t);
  return geodesic_flow(s, durations);
}

PhasePoint Manifold::geodesic_flow(const PhasePoint& s, std::span<const double> durations) const {
  require_member(s.position);
  if (s.velocity.size() != s.position.size()) {
    throw DimensionError(name() + ": velocity dimension mismatch");
  }
  const auto block_list = blocks();
  if (durations.size() != block_list.size()) {
    throw DimensionError(name() + ": expected " + std::to_string(block_list.size()) +
                         " flow durations");
  }
  for (double t : durations) {
    if (!std::isfinite(t)) throw DomainError(name() + ": non-finite flow duration");
  }

  PhasePoint out = s;
  std::visit(Overloaded{
                 [&](const manifolds::Product& k) {
                   for (std::size_t i = 0; i < k.parts.size(); ++i) {
                     const auto [offset, n] = block_list[i];
                     const PhasePoint part = k.parts[i].geodesic_flow(
                         {s.position.segment(offset, n), s.velocity.segment(offset, n)},
                         durations[i]);
                     out.position.segment(offset, n) = part.position;
                     out.velocity.segment(offset, n) = part.velocity;
                   }
                 },
                 [&](const auto& k) {
                   k.flow(out.position, out.velocity, durations[0]);
                   if constexpr (Renormalisable<std::decay_t<decltype(k)>>) {
                     if (k.residual(out.position) > kRenormaliseThreshold ||
                         (out.velocity - k.project(out.position, out.velocity)).norm() >
                             kRenormaliseThreshold * std::max(1.0, out.velocity.norm())) {
                       k.renormalise(out.position, out.velocity);
                     }
                   }
                 },
             },
             kind_);
  return out;
}

Vector Manifold::sample_velocity(const Vector& x, Rng& rng) const {
  return tangent_project(x, rng.normal_vector(ambient_dim()));
}

Vector tangent_project(const Manifold& m, const Vector& x, const Vector& u) {
  return m.tangent_project(x, u);
}

PhasePoint geodesic_flow(const Manifold& m, const PhasePoint& s, double t) {
  return m.geodesic_flow(s, t);
}

Vector sample_velocity(const Manifold& m, const Vector& x, Rng& rng) {
  return m.sample_velocity(x, rng);
}

PhasePoint reflective_flow(const PhasePoint& s, double eps) {
  const Eigen::Index d = s.position.size();
  if (d < 2 || s.velocity.size() != d) {
    throw DimensionError("reflective_flow: need matching position/velocity of length >= 2");
  }
  if (!std::isfinite(eps)) throw DomainError("reflective_flow: non-finite duration");
  if (!s.velocity.allFinite()) throw DivergenceError("reflective_flow: non-finite velocity");
  if (s.position.minCoeff() < -kMembershipTolerance ||
      std::abs(s.position.sum() - 1.0) > kMembershipTolerance) {
    throw MembershipError("reflective_flow: position is not in the simplex");
  }
  if (s.position.minCoeff() == 0.0) {
    throw BoundaryError("reflective_flow: position lies on a facet of the simplex");
  }

  if (eps < 0.0) {
    PhasePoint back = reflective_flow({s.position, -s.velocity}, -eps);
    back.velocity = -back.velocity;
    return back;
  }

  Vector x = s.position;
  Vector v = s.velocity;
  const double dd = static_cast<double>(d);
  const double scale = 2.0 / (dd - 1.0);
  double remaining = eps;
  std::size_t reflections = 0;

  while (remaining > 0.0) {
    double hit_time = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < d; ++i) {
      if (v[i] < 0.0) hit_time = std::min(hit_time, std::max(0.0, -x[i] / v[i]));
    }
    if (hit_time >= remaining) {
      x += remaining * v;
      break;
    }
    // Coordinates reaching zero at hit_time; normally exactly one.
    std::vector<Eigen::Index> hits;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (v[i] < 0.0 && std::max(0.0, -x[i] / v[i]) == hit_time) hits.push_back(i);
    }
    x += hit_time * v;
    remaining -= hit_time;
    for (Eigen::Index j : hits) x[j] = 0.0;
    for (Eigen::Index j : hits) {
      if (v[j] >= 0.0) continue;
      // v - 2 n n^T v with n = (d e_j - 1)/sqrt(d(d-1)).
      const double coef = scale * (dd * v[j] - v.sum()) / dd;
      v.array() += coef;
      v[j] -= coef * dd;
      if (++reflections > kMaxReflections) {
        throw DivergenceError("reflective_flow: exceeded " + std::to_string(kMaxReflections) +
                              " reflections");
      }
    }
  }
  return {std::move(x), std::move(v)};
}

Vector simplex_to_sphere(const Vector& theta) {
  if ((theta.array() < 0.0).any()) throw DomainError("simplex_to_sphere: negative weight");
  if (!theta.allFinite()) throw DomainError("simplex_to_sphere: non-finite weight");
  return theta.array().sqrt();
}

Vector sphere_to_simplex(const Vector& x) { return x.array().square(); }

}  // namespace geomc
