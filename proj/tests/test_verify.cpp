#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mde/errors.hpp"
#include "mde/metrics.hpp"
#include "mde/rng.hpp"
#include "mde/verify.hpp"

using namespace mde;
using testing::line;

TEST_SUITE("verify") {

TEST_CASE("bump function") {
  const auto f = bump_function(2.0);
  CHECK(f.value({0.0}) == 1.0);
  CHECK(f.value({2.0}) == 0.0);
  CHECK(f.value({0.0, 2.5}) == 0.0);
  CHECK(f.gradient({0.0})[0] == 0.0);
  for (int dim : {1, 2, 3}) CHECK(gradient_mismatch(f, dim, 200, 31) <= 1e-6);
  // Vanishes, with its gradient, on a shell just outside the support.
  CounterRng rng(32);
  for (int k = 0; k < 50; ++k) {
    const double a = rng.uniform(0.0, 6.283185307179586);
    const double r = rng.uniform(2.0, 2.5);
    const Point x{r * std::cos(a), r * std::sin(a)};
    CHECK(f.value(x) == 0.0);
    CHECK(norm(f.gradient(x)) == 0.0);
  }
  CHECK_THROWS_AS(bump_function(0.0), Error);
}

TEST_CASE("plateau function") {
  const auto f = plateau_function(1.0, 2.0);
  CHECK(f.value({0.5}) == 1.0);
  CHECK(f.value({2.0}) == 0.0);
  CHECK(f.value({1.5}) == doctest::Approx(0.5));
  for (int dim : {1, 2}) CHECK(gradient_mismatch(f, dim, 200, 33) <= 1e-6);
}

TEST_CASE("weak residual is first order for each preset") {
  for (const char* name : testing::kPresets) {
    CAPTURE(name);
    const auto cfg = testing::preset(name);
    const auto f = bump_function(1.1 * cfg.scenario.support_bound());
    double previous = NAN;
    for (int n : {4, 8, 16, 32}) {
      const auto r = weak_residual(solve(cfg.scenario, n), cfg.scenario, f, cfg.scenario.horizon);
      CHECK(r.time == cfg.scenario.horizon);
      if (!std::isnan(previous)) {
        CHECK(r.residual / previous >= 0.3);
        CHECK(r.residual / previous <= 0.8);
      }
      previous = r.residual;
    }
  }
}

TEST_CASE("weak residual of pure growth against the closed form") {
  // One atom at 0 growing at rate k: lhs = e^{kT} - 1 and the left-endpoint
  // sum is sum_l tau k e^{k t_l}.
  const double k = 0.7;
  const Scenario sc{"g", affine_field_mvf({0.0}, 0.0, 1.0), constant_growth(k), no_source(1),
                    line({0.0}, {1.0}), 1.0};
  const auto f = bump_function(4.0);
  const auto r = weak_residual(solve(sc, 8), sc, f, 1.0);
  double sum = 0.0;
  for (int l = 0; l < 8; ++l) sum += 0.125 * k * std::exp(k * l / 8.0);
  CHECK(r.lhs == doctest::Approx(std::exp(k) - 1.0).epsilon(1e-12));
  CHECK(r.rhs_growth == doctest::Approx(sum).epsilon(1e-12));
  CHECK(r.rhs_transport == 0.0);
  CHECK(r.residual == doctest::Approx(std::exp(k) - 1.0 - sum).epsilon(1e-9));
}

TEST_CASE("continuity experiment") {
  SUBCASE("expanding field: C_hat close to its Lipschitz constant") {
    const Scenario sc{"e", affine_field_mvf({0.0}, 0.5, 0.5), zero_growth(), no_source(1),
                      line({0.25}, {1.0}), 1.0};
    const auto rep = continuity_experiment(sc, line({0.25}, {1.0}), line({0.3125}, {1.0}), 16,
                                           {0.25, 0.5, 0.75, 1.0});
    CHECK(rep.initial_distance == doctest::Approx(0.0625));
    CHECK(rep.fitted_exponent > 0.25);
    CHECK(rep.fitted_exponent < 0.75);
    for (const auto& row : rep.rows) CHECK(row.ratio <= row.bound * (1.0 + 1e-12));
  }
  SUBCASE("barycenter field never expands the distance") {
    const auto cfg = testing::preset("barycenter");
    const auto rep = continuity_experiment(cfg.scenario, line({-0.5, 0.5}, {0.5, 0.5}),
                                           line({-0.4, 0.55}, {0.5, 0.5}), 8,
                                           {0.125, 0.25, 0.5, 0.75, 1.0});
    for (const auto& row : rep.rows) CHECK(row.ratio <= 1.0 + 1e-6);
  }
  SUBCASE("identical data trip the guard") {
    const auto cfg = testing::preset("transport");
    CHECK_THROWS_AS(continuity_experiment(cfg.scenario, cfg.scenario.initial,
                                          cfg.scenario.initial, 8, {1.0}),
                    InitialDataIdentical);
  }
}

TEST_CASE("semigroup property") {
  for (const char* name : testing::kPresets) {
    const auto cfg = testing::preset(name);
    CHECK(semigroup_check(cfg.scenario, 4, 0.25, 0.25) <= 1e-12);
    CHECK(semigroup_check(cfg.scenario, 8, 0.0, 0.5) == 0.0);
    CHECK(semigroup_check(cfg.scenario, 8, 0.375, 0.625) <= 1e-12);
  }
  const auto cfg = testing::preset("transport");
  const double perturbed = semigroup_check(cfg.scenario, 4, 0.25, 0.25, [](const DiscreteMeasure& m) {
    return m.plus(DiscreteMeasure::dirac({0.0}, 0.1));
  });
  CHECK(perturbed > 0.01);
  CHECK_THROWS_AS(semigroup_check(cfg.scenario, 4, 0.3, 0.25), NonMeshTime);
  CHECK_THROWS_AS(semigroup_check(cfg.scenario, 4, 0.75, 0.5), NonMeshTime);
}

TEST_CASE("fitted exponent is stable under N-doubling") {
  // Presets whose exponent is bounded away from zero; see README for the
  // lipschitz preset, whose exponent is close to 0.
  for (const char* name : {"transport", "growth", "decay"}) {
    CAPTURE(name);
    const auto cfg = testing::preset(name);
    const auto times = Mesh(8, 1, cfg.scenario.horizon).time_points();
    const double a = continuity_experiment(cfg.scenario, cfg.scenario.initial, *cfg.perturbed_initial,
                                           8, times).fitted_exponent;
    const double b = continuity_experiment(cfg.scenario, cfg.scenario.initial, *cfg.perturbed_initial,
                                           16, times).fitted_exponent;
    CHECK(a * b > 0.0);
    CHECK(std::max(std::abs(a), std::abs(b)) <= 2.0 * std::min(std::abs(a), std::abs(b)));
  }
}

}  // TEST_SUITE
