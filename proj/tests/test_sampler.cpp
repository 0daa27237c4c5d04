#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geomc/eigenmodel.hpp"
#include "geomc/errors.hpp"
#include "geomc/sampler.hpp"
#include "support.hpp"

using namespace geomc;

namespace {

TargetDensity bimodal_bvmf(double c1 = 0.0) {
  Vector diag(5);
  diag << -20.0, -10.0, 0.0, 10.0, 20.0;
  Vector c = Vector::Zero(5);
  c[0] = c1;
  return make_bvmf_target(BvmfParams(c, diag.asDiagonal()));
}

// Plain leapfrog HMC on R^n for a standard Gaussian centred at mu, drawing
// from the stream in the same order as the library kernel.
Vector textbook_hmc(const Vector& x0, const Vector& mu, double eps, std::size_t steps, Rng& rng) {
  auto grad = [&](const Vector& x) -> Vector { return -(x - mu); };
  auto logp = [&](const Vector& x) { return -0.5 * (x - mu).squaredNorm(); };
  const Vector v0 = rng.normal_vector(x0.size());
  Vector x = x0;
  Vector v = v0;
  for (std::size_t k = 0; k < steps; ++k) {
    v += 0.5 * eps * grad(x);
    x += eps * v;
    v += 0.5 * eps * grad(x);
  }
  const double h0 = logp(x0) - 0.5 * v0.squaredNorm();
  const double h1 = logp(x) - 0.5 * v.squaredNorm();
  return rng.uniform() < std::exp(h1 - h0) ? x : x0;
}

double mean_coordinate(const std::vector<Vector>& xs, Eigen::Index i, bool square) {
  double s = 0.0;
  for (const auto& x : xs) s += square ? x[i] * x[i] : x[i];
  return s / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("integrator on a flat sphere target is a pure geodesic step") {
  Rng rng(1);
  const Manifold s = Manifold::sphere(4);
  const TargetDensity flat = make_uniform_target(s);
  const Vector x = rng.normal_vector(4).normalized();
  const Vector v = s.sample_velocity(x, rng);
  const double eps[] = {0.3};
  const PhasePoint a = integrator_step(flat, {x, v}, eps);
  const PhasePoint b = s.geodesic_flow({x, v}, 0.3);
  CHECK((a.position - b.position).norm() < 1e-14);
  CHECK(std::abs(a.velocity.norm() - v.norm()) < 1e-12);
}

TEST_CASE("integrator on Euclidean space is a leapfrog step") {
  Rng rng(2);
  const Vector mu = rng.normal_vector(3);
  const TargetDensity g = make_gaussian_target(mu);
  const Vector x = rng.normal_vector(3);
  const Vector v = rng.normal_vector(3);
  const double eps[] = {0.1};
  const PhasePoint out = integrator_step(g, {x, v}, eps);
  Vector v1 = v - 0.05 * (x - mu);
  const Vector x1 = x + 0.1 * v1;
  v1 -= 0.05 * (x1 - mu);
  CHECK((out.position - x1).norm() < 1e-15);
  CHECK((out.velocity - v1).norm() < 1e-15);
}

TEST_CASE("integrator steps reverse under velocity negation") {
  Rng rng(3);
  const TargetDensity t = bimodal_bvmf();
  const double eps[] = {0.01};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = rng.normal_vector(5).normalized();
    const Vector v = t.manifold().sample_velocity(x, rng);
    const PhasePoint fwd = integrator_step(t, {x, v}, eps);
    const PhasePoint back = integrator_step(t, {fwd.position, -fwd.velocity}, eps);
    CHECK((back.position - x).norm() < 1e-10);
    CHECK((-back.velocity - v).norm() < 1e-10);
  }
}

TEST_CASE("integrator reverses on the simplex and on products") {
  Rng rng(4);
  const TargetDensity dir = make_dirichlet_simplex_target(DirichletParams(Vector::Constant(4, 2.0)));
  const double eps[] = {0.05};
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = test::random_simplex_interior(4, rng);
    const Vector v = 3.0 * dir.manifold().sample_velocity(x, rng);
    const PhasePoint fwd = integrator_step(dir, {x, v}, eps);
    const PhasePoint back = integrator_step(dir, {fwd.position, -fwd.velocity}, eps);
    CHECK((back.position - x).norm() < 1e-9);
    CHECK((-back.velocity - v).norm() < 1e-9);
  }

  const PlantedEigenmodel planted = [] {
    Rng data_rng(5);
    Vector lambda(2);
    lambda << 4.0, -3.0;
    return make_planted_eigenmodel(10, lambda, 0.2, data_rng);
  }();
  const TargetDensity em = make_eigenmodel_target(planted.data, 2);
  const double block_eps[] = {0.05, 0.1, 0.01};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = pack_eigenmodel({test::random_orthonormal(10, 2, rng), rng.normal_vector(2), rng.normal()});
    const Vector v = em.manifold().sample_velocity(x, rng);
    const PhasePoint fwd = integrator_step(em, {x, v}, block_eps);
    const PhasePoint back = integrator_step(em, {fwd.position, -fwd.velocity}, block_eps);
    CHECK((back.position - x).norm() < 1e-9);
    CHECK((-back.velocity - v).norm() < 1e-9);
  }
}

TEST_CASE("per-block step sizes") {
  const Manifold p = Manifold::product({Manifold::sphere(3), Manifold::euclidean(2)});
  const double one[] = {0.1};
  const double two[] = {0.1, 0.2};
  const double three[] = {0.1, 0.2, 0.3};
  const double bad[] = {0.1, -0.2};
  CHECK(block_step_sizes(p, one) == std::vector<double>{0.1, 0.1});
  CHECK(block_step_sizes(p, two) == std::vector<double>{0.1, 0.2});
  CHECK_THROWS_AS(block_step_sizes(p, three), DimensionError);
  CHECK_THROWS_AS(block_step_sizes(p, bad), DomainError);
}

TEST_CASE("tiny steps and flat targets are always accepted") {
  Rng rng(5);
  const TargetDensity t = bimodal_bvmf();
  const Vector x = Vector::Constant(5, 1.0 / std::sqrt(5.0));
  const ChainTrace tiny = run_chain(GeodesicHmc{{{1e-6}, 5}}, t, x, 200, rng);
  CHECK(tiny.acceptance_rate() == 1.0);
  const TargetDensity flat = make_uniform_target(Manifold::sphere(5));
  const ChainTrace free = run_chain(GeodesicHmc{{{0.5}, 10}}, flat, x, 200, rng);
  CHECK(free.acceptance_rate() == 1.0);
  for (double dh : free.delta_h) CHECK(std::abs(dh) < 1e-10);
}

TEST_CASE("Euclidean kernel equals textbook leapfrog HMC") {
  const Vector mu = Vector::LinSpaced(3, -1.0, 1.0);
  const TargetDensity g = make_gaussian_target(mu);
  Rng a(6);
  Rng b(6);
  Vector xa = Vector::Zero(3);
  Vector xb = Vector::Zero(3);
  const HmcConfig cfg{{0.3}, 7};
  for (int i = 0; i < 200; ++i) {
    xa = hmc_transition(g, xa, cfg, a).position;
    xb = textbook_hmc(xb, mu, 0.3, 7, b);
    CHECK((xa - xb).norm() < 1e-12);
  }
}

TEST_CASE("rejections return the input bit for bit") {
  Rng rng(7);
  const TargetDensity t = bimodal_bvmf(40.0);
  Vector x = Vector::Constant(5, 1.0 / std::sqrt(5.0));
  int rejections = 0;
  for (int i = 0; i < 500; ++i) {
    const Transition tr = hmc_transition(t, x, HmcConfig{{0.2}, 20}, rng);
    if (!tr.accepted) {
      ++rejections;
      CHECK(tr.position == x);
      CHECK(tr.log_density == t.log_density(x));
    }
    x = tr.position;
  }
  CHECK(rejections > 0);
}

TEST_CASE("bimodal preset settings accept most proposals") {
  Rng rng(8);
  const ChainTrace tr = run_chain(GeodesicHmc{{{0.01}, 20}}, bimodal_bvmf(),
                                  Vector::Constant(5, 1.0 / std::sqrt(5.0)), 10000, rng);
  CHECK(tr.acceptance_rate() >= 0.9);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.accepted[i]) CHECK(std::isfinite(tr.delta_h[i]));
  }
}

TEST_CASE("simplex random walk") {
  Rng rng(9);
  const TargetDensity flat = make_dirichlet_simplex_target(DirichletParams(Vector::Ones(3)));
  Vector x = Vector::Constant(3, 1.0 / 3.0);
  for (int i = 0; i < 1000; ++i) {
    x = rwmh_simplex_transition(flat, x, 0.1, rng).position;
    CHECK(std::abs(x.sum() - 1.0) < 1e-12);
  }
  const ChainTrace tiny = run_chain(RwMetropolisSimplex{1e-6}, flat, Vector::Constant(3, 1.0 / 3.0), 1000, rng);
  CHECK(tiny.acceptance_rate() == 1.0);

  const ChainTrace tr = run_chain(RwMetropolisSimplex{0.3}, flat, Vector::Constant(3, 1.0 / 3.0), 1000000, rng);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(mean_coordinate(tr.samples, i, false) - 1.0 / 3.0) < 0.005);
}

TEST_CASE("spherical random walk") {
  Rng rng(10);
  Vector x = Vector::Unit(3, 0);
  const Vector quarter = (std::numbers::pi / 2) * Vector::Unit(3, 1);
  CHECK((spherical_rw_proposal(x, quarter) - Vector::Unit(3, 1)).norm() < 1e-15);
  CHECK(spherical_rw_proposal(x, Vector::Zero(3)) == x);
  for (int i = 0; i < 100; ++i) {
    const Vector d = Manifold::sphere(3).tangent_project(x, 2.0 * rng.normal_vector(3));
    CHECK(std::abs(spherical_rw_proposal(x, d).norm() - 1.0) < 1e-12);
  }
  const TargetDensity flat = make_uniform_target(Manifold::sphere(3));
  const ChainTrace tr = run_chain(SphericalRandomWalk{1.0}, flat, x, 1000000, rng);
  Vector mean = Vector::Zero(3);
  for (const auto& s : tr.samples) mean += s;
  CHECK((mean / 1e6).norm() <= 0.01);
}

TEST_CASE("kernels refuse the wrong manifold") {
  Rng rng(11);
  const TargetDensity sphere = make_uniform_target(Manifold::sphere(3));
  CHECK_THROWS_AS(run_chain(RwMetropolisSimplex{0.1}, sphere, Vector::Unit(3, 0), 5, rng), ChainError);
  const TargetDensity simplex = make_dirichlet_simplex_target(DirichletParams(Vector::Ones(3)));
  CHECK_THROWS_AS(run_chain(SphericalRandomWalk{0.1}, simplex, Vector::Constant(3, 1.0 / 3.0), 5, rng),
                  ChainError);
}

TEST_CASE("run_chain basics") {
  const TargetDensity t = bimodal_bvmf();
  const Vector x = Vector::Constant(5, 1.0 / std::sqrt(5.0));
  Rng rng(12);
  CHECK(run_chain(GeodesicHmc{}, t, x, 0, rng).empty());
  Rng a(13);
  Rng b(13);
  const ChainTrace ta = run_chain(GeodesicHmc{}, t, x, 300, a);
  const ChainTrace tb = run_chain(GeodesicHmc{}, t, x, 300, b);
  CHECK(ta == tb);
  CHECK(ta.size() == 300);
  CHECK(ta.accepted.size() == 300);
  CHECK(ta.delta_h.size() == 300);
  CHECK(ta.log_density.size() == 300);
  CHECK(ta.log_density.back() == t.log_density(ta.samples.back()));
  CHECK_THROWS_AS(run_chain(GeodesicHmc{}, t, Vector::Ones(5), 3, rng), MembershipError);

  try {
    run_chain(GeodesicHmc{{{0.01, 0.02}, 5}}, t, x, 3, rng);
    FAIL("expected ChainError");
  } catch (const ChainError& e) {
    CHECK(e.step() == 0);
  }
}

TEST_CASE("von Mises-Fisher mean resultant length matches quadrature") {
  // E[x_3] under exp(2 x_3) on S^2 from the one-dimensional integral over
  // the polar angle.
  const int n = 20000;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = std::numbers::pi * i / n;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double f = std::exp(2.0 * std::cos(t)) * std::sin(t);
    num += w * std::cos(t) * f;
    den += w * f;
  }
  const double oracle = num / den;
  Vector c = Vector::Zero(3);
  c[2] = 2.0;
  Rng rng(14);
  const ChainTrace tr = run_chain(GeodesicHmc{{{0.3}, 5}}, make_vmf_target({c}),
                                  Vector::Unit(3, 0), 100000, rng);
  CHECK(std::abs(mean_coordinate(tr.samples, 2, false) - oracle) < 0.01);
}

TEST_CASE("Dirichlet moments from spherical HMC") {
  Vector alpha(3);
  alpha << 2.0, 3.0, 4.0;
  Rng rng(15);
  const ChainTrace tr = run_chain(GeodesicHmc{{{0.1}, 10}},
                                  make_dirichlet_sphere_target(DirichletParams(alpha)),
                                  Vector::Constant(3, 1.0 / std::sqrt(3.0)), 100000, rng);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(std::abs(mean_coordinate(tr.samples, i, true) - alpha[i] / 9.0) < 0.01);
  }
}

TEST_CASE("halving the step size quarters the energy error") {
  const TargetDensity t = bimodal_bvmf();
  auto mean_abs_dh = [&](double eps, std::size_t steps) {
    Rng rng(16);
    double sum = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vector x = rng.normal_vector(5).normalized();
      sum += std::abs(hmc_transition(t, x, HmcConfig{{eps}, steps}, rng).delta_h);
    }
    return sum / 1000.0;
  };
  const double ratio = mean_abs_dh(0.02, 10) / mean_abs_dh(0.01, 20);
  CHECK(ratio >= 3.4);
  CHECK(ratio <= 4.6);
}
