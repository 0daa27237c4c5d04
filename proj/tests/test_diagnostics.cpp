#include <doctest.h>

#include <cmath>
#include <vector>

#include "geomc/diagnostics.hpp"
#include "geomc/errors.hpp"

using namespace geomc;

namespace {

std::vector<double> ar1(double phi, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  double x = rng.normal() / std::sqrt(1.0 - phi * phi);
  for (auto& v : out) {
    x = phi * x + rng.normal();
    v = x;
  }
  return out;
}

ChainTrace trace_from(const std::vector<std::vector<double>>& columns) {
  ChainTrace t;
  for (std::size_t i = 0; i < columns.front().size(); ++i) {
    Vector x(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) x[static_cast<Eigen::Index>(j)] = columns[j][i];
    t.push({x, true, 0.0, 0.0});
  }
  return t;
}

}  // namespace

TEST_CASE("ess of independent draws is close to N") {
  Rng rng(1);
  const auto xs = ar1(0.0, 100000, rng);
  const double r = ess(xs) / 1e5;
  CHECK(r >= 0.95);
  CHECK(r <= 1.05);
}

TEST_CASE("ess of an AR(1) series matches its autocorrelation time") {
  Rng rng(2);
  const auto xs = ar1(0.5, 100000, rng);
  CHECK(std::abs(ess(xs) / 1e5 - 1.0 / 3.0) < 0.03);
}

TEST_CASE("ess degenerate cases") {
  std::vector<double> alternating(1000);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2 ? 1.0 : -1.0;
  bool undefined_or_super = false;
  try {
    undefined_or_super = ess(alternating) > 1000.0;
  } catch (const UndefinedEssError&) {
    undefined_or_super = true;
  }
  CHECK(undefined_or_super);
  CHECK_THROWS_AS(ess(std::vector<double>(100, 3.0)), UndefinedEssError);
  CHECK_THROWS_AS(ess(std::vector<double>(5, 1.0)), DomainError);
  std::vector<double> bad(20, 1.0);
  bad[3] = NAN;
  CHECK_THROWS_AS(ess(bad), DomainError);
}

TEST_CASE("ess can exceed N for antithetic chains") {
  Rng rng(3);
  const auto xs = ar1(-0.5, 100000, rng);
  CHECK(ess(xs) > 1e5);
}

TEST_CASE("ess is invariant under affine maps") {
  Rng rng(4);
  const auto xs = ar1(0.7, 5000, rng);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = -3.5 * xs[i] + 1e3;
  CHECK(ess(ys) == doctest::Approx(ess(xs)).epsilon(1e-9));
}

TEST_CASE("summaries") {
  Rng rng(5);
  const ChainTrace t = trace_from({ar1(0.5, 20000, rng), ar1(0.2, 20000, rng)});
  const EssReport r = summarize(t, 2.0);
  CHECK(r.acceptance_rate == 1.0);
  CHECK(r.mean_ess == (r.per_coordinate[0] + r.per_coordinate[1]) / 2.0);
  CHECK(r.ess_per_second.has_value());
  CHECK(*r.ess_per_second == doctest::Approx(r.mean_ess / 2.0));
  CHECK(r.ess_percent == doctest::Approx(100.0 * r.mean_ess / 20000.0));
  CHECK_FALSE(summarize(t, 0.0).ess_per_second.has_value());

  const EssReport burned = summarize(t, 1.0, 2000);
  CHECK(burned.burn_in == 2000);
  CHECK(burned.ess_percent == doctest::Approx(100.0 * burned.mean_ess / 18000.0));
  CHECK(burned.ess_percent_raw == doctest::Approx(100.0 * burned.mean_ess / 20000.0));

  CHECK_THROWS_AS(summarize(ChainTrace{}, 1.0), DomainError);
  CHECK_THROWS_AS(summarize(t, 1.0, 20000), DomainError);
}

TEST_CASE("duplicating every sample halves the effective fraction") {
  Rng rng(6);
  const auto xs = ar1(0.3, 20000, rng);
  std::vector<double> doubled;
  for (double x : xs) {
    doubled.push_back(x);
    doubled.push_back(x);
  }
  const EssReport once = summarize(trace_from({xs}), 0.0);
  const EssReport twice = summarize(trace_from({doubled}), 0.0);
  CHECK(std::abs(twice.ess_percent / once.ess_percent - 0.5) < 0.05);
  CHECK(std::abs(twice.mean_ess / once.mean_ess - 1.0) < 0.1);
}

TEST_CASE("constant coordinates count as zero ess") {
  Rng rng(7);
  const EssReport r = summarize(trace_from({ar1(0.0, 1000, rng), std::vector<double>(1000, 2.0)}), 0.0);
  CHECK(r.per_coordinate[1] == 0.0);
  CHECK(r.mean_ess == r.per_coordinate[0] / 2.0);
}
