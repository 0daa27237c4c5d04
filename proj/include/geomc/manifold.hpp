#ifndef GEOMC_MANIFOLD_HPP
#define GEOMC_MANIFOLD_HPP

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geomc/linalg.hpp"
#include "geomc/rng.hpp"

namespace geomc {

/// Points off the manifold by more than this are rejected.
inline constexpr double kMembershipTolerance = 1e-9;
/// Flows renormalise their output once the constraint residual exceeds this.
inline constexpr double kRenormaliseThreshold = 1e-12;
/// Reflection budget of a single reflective_flow call.
inline constexpr std::size_t kMaxReflections = 1'000'000;

/// Position and velocity in ambient coordinates. Matrix-valued points are
/// stored column-stacked.
struct PhasePoint {
  Vector position;
  Vector velocity;
};

/// Contiguous slice of the ambient coordinates owned by one component of a
/// product manifold.
struct Block {
  Eigen::Index offset;
  Eigen::Index size;
};

namespace manifolds {

// The structs below carry the raw geometry of each manifold kind: no
// membership checks and no drift control. Manifold wraps them with both.

/// R^n. Straight-line flow, empty normal space.
struct Euclidean {
  Eigen::Index n;

  double residual(const Vector& x) const;
  Vector project(const Vector& x, const Vector& u) const;
  void flow(Vector& x, Vector& v, double t) const;
};

/// {x : N^T (x - origin) = 0} for an orthonormal normal basis N.
struct AffineSubspace {
  Vector origin;
  Matrix normal_basis;

  double residual(const Vector& x) const;
  Vector project(const Vector& x, const Vector& u) const;
  void flow(Vector& x, Vector& v, double t) const;
};

/// Unit sphere S^{d-1} in R^d; great-circle flow.
struct Sphere {
  Eigen::Index d;

  double residual(const Vector& x) const;
  Vector project(const Vector& x, const Vector& u) const;
  void flow(Vector& x, Vector& v, double t) const;
  void renormalise(Vector& x, Vector& v) const;
};

/// d x p matrices with orthonormal columns.
struct Stiefel {
  Eigen::Index d;
  Eigen::Index p;

  double residual(const Vector& x) const;
  /// U - X (X^T U + U^T X) / 2.
  Vector project(const Vector& x, const Vector& u) const;
  /// Geodesic through the exponential of the 2p x 2p block matrix
  /// [[A, -S], [I, A]] with A = X^T V and S = V^T V.
  void flow(Vector& x, Vector& v, double t) const;
  void renormalise(Vector& x, Vector& v) const;
};

/// d x d orthogonal matrices; X(t) = X exp(tA), V(t) = V exp(tA).
struct OrthogonalGroup {
  Eigen::Index d;

  double residual(const Vector& x) const;
  Vector project(const Vector& x, const Vector& u) const;
  void flow(Vector& x, Vector& v, double t) const;
  void renormalise(Vector& x, Vector& v) const;
};

/// Probability simplex in R^d: the hyperplane sum(x) = 1 with straight-line
/// motion that reflects off the facets x_i = 0.
struct ReflectiveSimplex {
  Eigen::Index d;

  double residual(const Vector& x) const;
  Vector project(const Vector& x, const Vector& u) const;
  void flow(Vector& x, Vector& v, double t) const;
  void renormalise(Vector& x, Vector& v) const;
};

}  // namespace manifolds

class Manifold;

namespace manifolds {
struct Product {
  std::vector<Manifold> parts;
};
}  // namespace manifolds

/// Immutable value describing an embedded manifold.
class Manifold {
 public:
  using Kind = std::variant<manifolds::Euclidean, manifolds::AffineSubspace, manifolds::Sphere,
                            manifolds::Stiefel, manifolds::OrthogonalGroup,
                            manifolds::ReflectiveSimplex, manifolds::Product>;

  static Manifold euclidean(Eigen::Index n);
  static Manifold affine(Vector origin, Matrix normal_basis);
  static Manifold sphere(Eigen::Index d);
  static Manifold stiefel(Eigen::Index d, Eigen::Index p);
  static Manifold orthogonal(Eigen::Index d);
  static Manifold simplex(Eigen::Index d);
  static Manifold product(std::vector<Manifold> parts);

  const Kind& kind() const noexcept { return kind_; }
  std::string name() const;

  Eigen::Index ambient_dim() const;
  /// One block per top-level product component; a single block otherwise.
  std::vector<Block> blocks() const;

  /// Constraint residual of x (0 on the manifold).
  double residual(const Vector& x) const;
  bool contains(const Vector& x, double tol = kMembershipTolerance) const;
  /// Throws DimensionError or MembershipError.
  void require_member(const Vector& x) const;
  /// Size of the normal component of v at x.
  double tangent_residual(const Vector& x, const Vector& v) const;

  Vector tangent_project(const Vector& x, const Vector& u) const;
  PhasePoint geodesic_flow(const PhasePoint& s, double t) const;
  /// Flow each top-level block for its own duration.
  PhasePoint geodesic_flow(const PhasePoint& s, std::span<const double> durations) const;
  Vector sample_velocity(const Vector& x, Rng& rng) const;

 private:
  explicit Manifold(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

// Free-function surface mirroring the member operations.

Vector tangent_project(const Manifold& m, const Vector& x, const Vector& u);
PhasePoint geodesic_flow(const Manifold& m, const PhasePoint& s, double t);
Vector sample_velocity(const Manifold& m, const Vector& x, Rng& rng);

/// Straight-line motion inside the simplex of dimension x.size(), reflecting
/// the velocity about the in-plane facet normal (d e_j - 1)/sqrt(d(d-1))
/// whenever coordinate j reaches zero, until `eps` time has elapsed. Negative
/// eps runs the flow backwards. Throws BoundaryError if a coordinate is
/// exactly zero on entry, DivergenceError once kMaxReflections is exceeded.
PhasePoint reflective_flow(const PhasePoint& s, double eps);

/// Element-wise square root of a simplex point, landing on the positive
/// orthant of the sphere.
Vector simplex_to_sphere(const Vector& theta);
/// Element-wise square; valid in every orthant.
Vector sphere_to_simplex(const Vector& x);

}  // namespace geomc

#endif  // GEOMC_MANIFOLD_HPP
