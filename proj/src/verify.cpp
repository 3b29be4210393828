#include "mde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mde/errors.hpp"
#include "mde/metrics.hpp"
#include "mde/rng.hpp"

namespace mde {

TestFunction bump_function(double rho) {
  if (!(rho > 0.0)) throw Error("bump radius must be positive");
  TestFunction f;
  f.name = "bump";
  f.support = rho;
  const double rho2 = rho * rho;
  f.value = [rho2](const Point& x) {
    const double s = std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / rho2;
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s));
  };
  f.gradient = [rho2](const Point& x) {
    const double s = std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / rho2;
    Point g(x.size(), 0.0);
    if (s >= 1.0) return g;
    const double v = std::exp(1.0 - 1.0 / (1.0 - s));
    const double scale = -2.0 * v / (rho2 * (1.0 - s) * (1.0 - s));
    for (std::size_t k = 0; k < x.size(); ++k) g[k] = scale * x[k];
    return g;
  };
  return f;
}

namespace {

double transition(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double transition_derivative(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }

}  // namespace

TestFunction plateau_function(double inner, double outer) {
  if (!(outer > inner && inner >= 0.0)) throw Error("plateau needs 0 <= inner < outer");
  TestFunction f;
  f.name = "plateau";
  f.support = outer;
  const double width = outer - inner;
  f.value = [outer, width](const Point& x) {
    const double u = (outer - norm(x)) / width;
    const double a = transition(u);
    const double b = transition(1.0 - u);
    return a / (a + b);
  };
  f.gradient = [outer, width](const Point& x) {
    Point g(x.size(), 0.0);
    const double r = norm(x);
    const double u = (outer - r) / width;
    if (u <= 0.0 || u >= 1.0 || r == 0.0) return g;
    const double a = transition(u);
    const double b = transition(1.0 - u);
    const double da = transition_derivative(u);
    const double db = transition_derivative(1.0 - u);
    const double dh = (da * b + a * db) / ((a + b) * (a + b));
    const double scale = -dh / (width * r);
    for (std::size_t k = 0; k < x.size(); ++k) g[k] = scale * x[k];
    return g;
  };
  return f;
}

double gradient_mismatch(const TestFunction& f, int dim, int samples, unsigned long long seed,
                         double h) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point x(dim);
    do {
      for (auto& c : x) c = rng.uniform(-f.support, f.support);
    } while (norm(x) >= f.support);
    const Point g = f.gradient(x);
    for (int k = 0; k < dim; ++k) {
      Point xp = x;
      Point xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (f.value(xp) - f.value(xm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[k]));
    }
  }
  return worst;
}

ResidualReport weak_residual(const Trajectory& traj, const Scenario& scenario,
                             const TestFunction& f, double t) {
  ResidualReport r;
  r.n = traj.mesh.n();
  const std::size_t last = traj.mesh.nearest_index(t);
  r.time = traj.times()[last];
  r.lhs = integrate(traj.states[last], f.value) - integrate(traj.states[0], f.value);

  const auto& steps = traj.mesh.steps();
  for (std::size_t l = 0; l < last; ++l) {
    const double tau = steps[l];
    const auto& mu = traj.states[l];
    if (!mu.empty()) {
      double transport = 0.0;
      const VelocityMeasure field = scenario.mvf(mu);
      for (const auto& a : field.atoms()) {
        const Point g = f.gradient(a.location);
        double dot = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) dot += g[k] * a.velocity[k];
        transport += a.weight * dot;
      }
      r.rhs_transport += tau * transport;
      r.rhs_growth += tau * integrate(mu, [&](const Point& x) {
        return f.value(x) * scenario.growth(x, mu);
      });
    }
    r.rhs_source += tau * integrate(scenario.source(mu), f.value);
  }
  r.residual = std::abs(r.lhs - r.rhs_total());
  return r;
}

ContinuityReport continuity_experiment(const Scenario& scenario, const DiscreteMeasure& mu0,
                                       const DiscreteMeasure& nu0, int n,
                                       const std::vector<double>& probe_times) {
  Scenario first = scenario;
  first.initial = mu0;
  Scenario second = scenario;
  second.initial = nu0;
  const Trajectory a = solve(first, n);
  const Trajectory b = solve(second, n);

  ContinuityReport rep;
  rep.n = n;
  rep.initial_distance = flat_distance(a.states[0], b.states[0]).distance;
  if (rep.initial_distance < 1e-13) {
    std::ostringstream msg;
    msg << "projected initial data coincide at N = " << n << " (flat distance "
        << rep.initial_distance << ")";
    throw InitialDataIdentical(msg.str());
  }

  rep.fitted_exponent = -std::numeric_limits<double>::infinity();
  for (double t : probe_times) {
    ContinuityRow row;
    const std::size_t idx = a.mesh.index_at_or_before(t);
    row.time = a.times()[idx];
    row.distance = flat_distance(a.states[idx], b.states[idx]).distance;
    row.ratio = row.distance / rep.initial_distance;
    if (row.time > 0.0 && row.ratio > 0.0)
      rep.fitted_exponent = std::max(rep.fitted_exponent, std::log(row.ratio) / row.time);
    rep.rows.push_back(row);
  }
  if (!std::isfinite(rep.fitted_exponent)) rep.fitted_exponent = 0.0;
  for (auto& row : rep.rows) row.bound = std::exp(rep.fitted_exponent * row.time);
  return rep;
}

double semigroup_check(const Scenario& scenario, int n, double t1, double t2,
                       const std::function<DiscreteMeasure(const DiscreteMeasure&)>& perturb) {
  auto on_mesh = [n](double t) {
    const double k = t * n;
    return t >= 0.0 && std::abs(k - std::round(k)) <= 1e-9;
  };
  if (!on_mesh(t1) || !on_mesh(t2) || t1 + t2 > scenario.horizon + 1e-9) {
    std::ostringstream msg;
    msg << "semigroup split (" << t1 << ", " << t2 << ") is not on the N = " << n
        << " mesh within [0, " << scenario.horizon << "]";
    throw NonMeshTime(msg.str());
  }
  const auto k1 = static_cast<std::size_t>(std::llround(t1 * n));
  const auto k2 = static_cast<std::size_t>(std::llround(t2 * n));
  if (k1 + k2 == 0) return 0.0;

  SolveOptions full_opts;
  full_opts.horizon = static_cast<double>(k1 + k2) / n;
  const Trajectory full = solve(scenario, n, full_opts);

  DiscreteMeasure restart = full.states[k1];
  if (perturb) restart = perturb(restart);
  DiscreteMeasure end = restart;
  if (k2 > 0) {
    SolveOptions opts;
    opts.start_state = restart;
    opts.horizon = static_cast<double>(k2) / n;
    end = solve(scenario, n, opts).final_state();
  }
  return flat_distance(full.final_state(), end).distance;
}

}  // namespace mde
