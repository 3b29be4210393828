#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mde/errors.hpp"
#include "mde/metrics.hpp"
#include "mde/sampling.hpp"

using namespace mde;

namespace {

DiscreteMeasure line(std::vector<double> x, std::vector<double> w) {
  return DiscreteMeasure::on_line(x, w);
}

// W1 as the integral of |F - G| over the real line, with F, G the CDFs.
// Shares nothing with the quantile-based implementation.
double cdf_w1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<double> xs;
  for (const auto* m : {&mu, &nu})
    for (const auto& a : m->atoms()) xs.push_back(a.location[0]);
  std::sort(xs.begin(), xs.end());
  auto cdf = [](const DiscreteMeasure& m, double x) {
    double s = 0.0;
    for (const auto& a : m.atoms())
      if (a.location[0] <= x) s += a.weight;
    return s;
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    total += std::abs(cdf(mu, xs[k]) - cdf(nu, xs[k])) * (xs[k + 1] - xs[k]);
  return total;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("known flat distances") {
  CHECK(flat_distance(DiscreteMeasure::dirac({0.0}), DiscreteMeasure::dirac({1.0})).distance ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat_distance(DiscreteMeasure::dirac({0.0}), DiscreteMeasure::dirac({5.0})).distance ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(flat_distance(DiscreteMeasure::dirac({0.0}, 2.0), DiscreteMeasure::dirac({0.0})).distance ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Move half a unit a distance 0.5, then discard the remaining 0.5.
  CHECK(flat_distance(DiscreteMeasure::dirac({0.0}), DiscreteMeasure::dirac({0.5}, 0.5)).distance ==
        doctest::Approx(0.75).epsilon(1e-12));
  // Against the zero measure every unit is removed.
  CHECK(flat_distance(line({0.0, 3.0}, {0.5, 0.25}), DiscreteMeasure(1)).distance ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(flat_distance(DiscreteMeasure(2), DiscreteMeasure(2)).distance == 0.0);
  CHECK_THROWS_AS(flat_distance(DiscreteMeasure(1), DiscreteMeasure(2)), DimensionMismatch);
}

TEST_CASE("2D distances use the Euclidean norm") {
  const auto a = DiscreteMeasure::dirac({0.0, 0.0});
  const auto b = DiscreteMeasure::dirac({0.6, 0.8});
  CHECK(flat_distance(a, b).distance == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("primal optimum matches the dual LP with a feasible certificate") {
  CounterRng rng(11);
  for (int k = 0; k < 60; ++k) {
    MeasureSampler shape;
    shape.dim = 1 + k % 3;
    shape.max_atoms = 12;
    shape.box = 2.0;
    shape.max_weight = 2.0;
    const auto mu = sample_measure(rng, shape);
    const auto nu = sample_measure(rng, shape);
    const auto primal = flat_distance(mu, nu);
    const auto dual = flat_distance_dual(mu, nu);
    CHECK(std::abs(primal.distance - dual.value) <= 1e-9);
    CHECK(dual.certificate.feasible());
    CHECK(dual.certificate.pairing(mu, nu) == doctest::Approx(dual.value).epsilon(1e-12));
    CHECK(plan_is_consistent(primal.plan, mu, nu));
  }
}

TEST_CASE("metric axioms") {
  CounterRng rng(12);
  MeasureSampler shape;
  shape.dim = 2;
  shape.box = 1.5;
  for (int k = 0; k < 40; ++k) {
    const auto a = sample_measure(rng, shape);
    const auto b = sample_measure(rng, shape);
    const auto c = sample_measure(rng, shape);
    const double ab = flat_distance(a, b).distance;
    CHECK(ab == flat_distance(b, a).distance);
    CHECK(ab <= flat_distance(a, c).distance + flat_distance(c, b).distance + 1e-9);
    CHECK(flat_distance(a, a).distance <= 1e-15);
  }
}

TEST_CASE("no removal happens between nearby equal masses, so flat equals W1") {
  CounterRng rng(13);
  MeasureSampler shape;
  shape.box = 0.9;  // all pairwise distances below 2
  shape.probability = true;
  for (int k = 0; k < 50; ++k) {
    const auto mu = sample_measure(rng, shape);
    const auto nu = sample_measure(rng, shape);
    CHECK(flat_distance(mu, nu).distance == doctest::Approx(wasserstein1_1d(mu, nu)).epsilon(1e-9));
  }
}

TEST_CASE("quantile-based W1 against the CDF integral and the balanced LP") {
  CHECK(wasserstein1_1d(line({0.0, 1.0}, {0.5, 0.5}), line({0.0, 2.0}, {0.5, 0.5})) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CounterRng rng(14);
  MeasureSampler shape;
  shape.box = 3.0;
  shape.max_atoms = 10;
  for (int k = 0; k < 50; ++k) {
    const auto mu = sample_measure(rng, shape);
    auto nu = sample_measure(rng, shape);
    nu = nu.scaled(total_mass(mu) / total_mass(nu));
    const double w = wasserstein1_1d(mu, nu);
    CHECK(w == doctest::Approx(cdf_w1(mu, nu)).epsilon(1e-9));
    CHECK(std::abs(w - balanced_transport(mu, nu).distance) <= 1e-9);
  }
  CHECK_THROWS_AS(wasserstein1_1d(line({0.0}, {1.0}), line({0.0}, {2.0})), MassMismatch);
  CHECK_THROWS_AS(balanced_transport(line({0.0}, {1.0}), line({0.0}, {2.0})), MassMismatch);
}

TEST_CASE("quantile returns the smallest atom whose CDF exceeds y") {
  const auto m = line({-1.0, 0.0, 2.0}, {0.25, 0.25, 0.5});
  CHECK(quantile(m, 0.0) == -1.0);
  CHECK(quantile(m, 0.25) == 0.0);
  CHECK(quantile(m, 0.49) == 0.0);
  CHECK(quantile(m, 0.5) == 2.0);
  CHECK(quantile(m, 0.999) == 2.0);
}

TEST_CASE("barycenter split") {
  SUBCASE("the median atom carries the split") {
    const auto s = barycenter_split(line({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25}));
    CHECK(s.median == 0.0);
    CHECK(s.fraction_defined);
    CHECK(s.fraction == doctest::Approx(0.5));
    CHECK(total_mass(s.left) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(total_mass(s.right) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("CDF exactly 1/2 between atoms") {
    const auto s = barycenter_split(line({-0.5, 0.5}, {0.5, 0.5}));
    CHECK(s.median == 0.5);
    CHECK(s.fraction == 0.0);
    CHECK(s.left.size() == 1);
    CHECK(s.right.size() == 1);
  }
  CHECK_THROWS_AS(barycenter_split(line({0.0}, {0.9})), NotProbability);
  CHECK_THROWS_AS(barycenter_split(DiscreteMeasure(2, {{{0.0, 0.0}, 1.0}})), DimensionMismatch);
}

TEST_CASE("W1 splits over the median halves") {
  CounterRng rng(15);
  MeasureSampler shape;
  shape.probability = true;
  for (int k = 0; k < 50; ++k) {
    const auto mu = sample_measure(rng, shape);
    const auto nu = sample_measure(rng, shape);
    const auto a = barycenter_split(mu);
    const auto b = barycenter_split(nu);
    const double parts = wasserstein1_1d(a.left, b.left) + wasserstein1_1d(a.right, b.right);
    CHECK(std::abs(wasserstein1_1d(mu, nu) - parts) <= 1e-9);
  }
}

TEST_CASE("plan CSV lists transported mass then removals") {
  const auto mu = DiscreteMeasure::dirac({0.0});
  const auto nu = DiscreteMeasure::dirac({0.5}, 0.5);
  const auto r = flat_distance(mu, nu);
  std::ostringstream s;
  write_plan_csv(s, r.plan, mu, nu);
  CHECK(s.str() == "i,j,mass,cost\n0,0,0.5,0.5\n0,-,0.5\n");
}

}  // TEST_SUITE
