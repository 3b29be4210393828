#include "mde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "mde/errors.hpp"
#include "mde/simplex.hpp"
#include "transport.hpp"

namespace mde {

namespace {

constexpr double kRemovalCost = 1.0;
constexpr double kCostCap = 2.0 * kRemovalCost;
constexpr double kMassTol = 1e-12;

void require_same_dim(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    std::ostringstream msg;
    msg << "measures live in different dimensions (" << mu.dim() << " vs " << nu.dim() << ")";
    throw DimensionMismatch(msg.str());
  }
}

std::vector<double> weights_of(const DiscreteMeasure& m) {
  std::vector<double> w;
  w.reserve(m.size());
  for (const auto& a : m.atoms()) w.push_back(a.weight);
  return w;
}

TransportPlan to_plan(detail::TransportSolution&& sol, std::size_t rows, std::size_t cols) {
  TransportPlan plan;
  plan.rows = rows;
  plan.cols = cols;
  plan.mass = std::move(sol.flow);
  plan.source_slack = std::move(sol.supply_left);
  plan.sink_slack = std::move(sol.demand_left);
  return plan;
}

struct Steps {
  std::vector<double> locations;
  std::vector<double> cumulative;  // normalized, last entry forced to 1
  double mass = 0.0;
};

Steps quantile_steps(const DiscreteMeasure& mu) {
  if (mu.dim() != 1) throw DimensionMismatch("quantile functions need a 1D measure");
  const auto c = mu.canonicalize();
  if (c.empty()) throw EmptyMeasure("measure has no mass");
  Steps s;
  s.mass = total_mass(c);
  double run = 0.0;
  for (const auto& a : c.atoms()) {
    run += a.weight;
    s.locations.push_back(a.location[0]);
    s.cumulative.push_back(run / s.mass);
  }
  s.cumulative.back() = 1.0;
  return s;
}

bool atoms_before(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return std::lexicographical_compare(
      a.atoms().begin(), a.atoms().end(), b.atoms().begin(), b.atoms().end(),
      [](const Atom& x, const Atom& y) {
        return std::tie(x.location, x.weight) < std::tie(y.location, y.weight);
      });
}

TransportPlan transposed(const TransportPlan& p) {
  TransportPlan t;
  t.rows = p.cols;
  t.cols = p.rows;
  t.mass.assign(p.mass.size(), 0.0);
  for (std::size_t i = 0; i < p.rows; ++i)
    for (std::size_t j = 0; j < p.cols; ++j) t.mass[j * t.cols + i] = p.at(i, j);
  t.source_slack = p.sink_slack;
  t.sink_slack = p.source_slack;
  return t;
}

FlatResult flat_distance_ordered(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();

  detail::TransportProblem prob;
  prob.supply = weights_of(mu);
  prob.demand = weights_of(nu);
  prob.partial = true;
  prob.cost.assign(n * m, 0.0);
  prob.allowed.assign(n * m, 0);
  std::vector<double> unit(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = std::min(distance(mu[i].location, nu[j].location), kCostCap);
      unit[i * m + j] = d;
      // Arcs at the cap are never better than removing both ends.
      if (d < kCostCap) {
        prob.cost[i * m + j] = d - kCostCap;
        prob.allowed[i * m + j] = 1;
      }
    }
  }

  FlatResult res;
  res.plan = to_plan(detail::solve_transport(prob), n, m);
  double value = 0.0;
  for (std::size_t k = 0; k < n * m; ++k) value += res.plan.mass[k] * unit[k];
  for (double s : res.plan.source_slack) value += kRemovalCost * s;
  for (double s : res.plan.sink_slack) value += kRemovalCost * s;
  res.distance = value;
  return res;
}

}  // namespace

double TransportPlan::transported() const {
  double s = 0.0;
  for (double x : mass) s += x;
  return s;
}

FlatResult flat_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_dim(mu, nu);
  // Solve with the arguments in a fixed order so the value is bitwise
  // symmetric; the plan is transposed back when they were swapped.
  if (atoms_before(nu, mu)) {
    FlatResult r = flat_distance_ordered(nu, mu);
    r.plan = transposed(r.plan);
    return r;
  }
  return flat_distance_ordered(mu, nu);
}

FlatResult balanced_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_dim(mu, nu);
  const double a = total_mass(mu);
  const double b = total_mass(nu);
  if (std::abs(a - b) > kMassTol * std::max(a, b)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "balanced transport needs equal masses, got " << a << " and " << b;
    throw MassMismatch(msg.str());
  }
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  detail::TransportProblem prob;
  prob.supply = weights_of(mu);
  prob.demand = weights_of(nu);
  prob.cost.assign(n * m, 0.0);
  prob.allowed.assign(n * m, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) prob.cost[i * m + j] = distance(mu[i].location, nu[j].location);

  FlatResult res;
  res.plan = to_plan(detail::solve_transport(prob), n, m);
  double value = 0.0;
  for (std::size_t k = 0; k < n * m; ++k) value += res.plan.mass[k] * prob.cost[k];
  res.distance = value;
  return res;
}

bool plan_is_consistent(const TransportPlan& plan, const DiscreteMeasure& mu,
                        const DiscreteMeasure& nu, double tol) {
  if (plan.rows != mu.size() || plan.cols != nu.size()) return false;
  const double scale = std::max({total_mass(mu), total_mass(nu), 1.0});
  for (double x : plan.mass)
    if (x < 0.0) return false;
  for (std::size_t i = 0; i < plan.rows; ++i) {
    double s = plan.source_slack[i];
    if (s < 0.0) return false;
    for (std::size_t j = 0; j < plan.cols; ++j) s += plan.at(i, j);
    if (std::abs(s - mu[i].weight) > tol * scale) return false;
  }
  for (std::size_t j = 0; j < plan.cols; ++j) {
    double s = plan.sink_slack[j];
    if (s < 0.0) return false;
    for (std::size_t i = 0; i < plan.rows; ++i) s += plan.at(i, j);
    if (std::abs(s - nu[j].weight) > tol * scale) return false;
  }
  return true;
}

bool DualCertificate::feasible(double tol) const {
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (std::abs(values[p]) > 1.0 + tol) return false;
    for (std::size_t q = p + 1; q < points.size(); ++q)
      if (std::abs(values[p] - values[q]) > distance(points[p], points[q]) + tol) return false;
  }
  return true;
}

double DualCertificate::pairing(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const {
  std::map<Point, double> psi;
  for (std::size_t k = 0; k < points.size(); ++k) psi[points[k]] = values[k];
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.weight * psi.at(a.location);
  for (const auto& a : nu.atoms()) s -= a.weight * psi.at(a.location);
  return s;
}

DualResult flat_distance_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_dim(mu, nu);
  // Net signed weight per distinct support point.
  std::map<Point, double> net;
  for (const auto& a : mu.atoms()) net[a.location] += a.weight;
  for (const auto& a : nu.atoms()) net[a.location] -= a.weight;

  DualResult res;
  std::vector<double> coef;
  for (const auto& [p, w] : net) {
    res.certificate.points.push_back(p);
    coef.push_back(w);
  }
  const std::size_t k = coef.size();
  if (k == 0) return res;

  // Shift psi = u - 1 so that u in [0, 2] and the origin is feasible.
  DenseSimplex lp(k, coef);
  const auto& pts = res.certificate.points;
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = 0; q < k; ++q) {
      if (p == q) continue;
      lp.add_sparse_constraint({{p, 1.0}, {q, -1.0}}, distance(pts[p], pts[q]));
    }
    lp.add_sparse_constraint({{p, 1.0}}, 2.0);
  }
  const auto sol = lp.solve();
  double offset = 0.0;
  for (double c : coef) offset += c;
  res.value = sol.value - offset;
  res.certificate.values.resize(k);
  for (std::size_t p = 0; p < k; ++p) res.certificate.values[p] = sol.x[p] - 1.0;
  return res;
}

double quantile(const DiscreteMeasure& mu, double y) {
  const auto s = quantile_steps(mu);
  for (std::size_t k = 0; k < s.cumulative.size(); ++k)
    if (s.cumulative[k] > y) return s.locations[k];
  return s.locations.back();
}

double wasserstein1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw DimensionMismatch("wasserstein1_1d needs 1D measures");
  const auto f = quantile_steps(mu);
  const auto g = quantile_steps(nu);
  if (std::abs(f.mass - g.mass) > kMassTol * std::max(f.mass, g.mass)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "W1 needs equal masses, got " << f.mass << " and " << g.mass;
    throw MassMismatch(msg.str());
  }
  double integral = 0.0;
  double y = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < f.cumulative.size() && j < g.cumulative.size()) {
    const double next = std::min(f.cumulative[i], g.cumulative[j]);
    if (next > y) integral += (next - y) * std::abs(f.locations[i] - g.locations[j]);
    y = std::max(y, next);
    if (f.cumulative[i] <= y) ++i;
    if (g.cumulative[j] <= y) ++j;
  }
  return integral * 0.5 * (f.mass + g.mass);
}

BarycenterSplit barycenter_split(const DiscreteMeasure& mu) {
  if (mu.dim() != 1) throw DimensionMismatch("barycenter split needs a 1D measure");
  const auto c = mu.canonicalize();
  if (c.empty()) throw EmptyMeasure("barycenter split of an empty measure");
  const double mass = total_mass(c);
  if (std::abs(mass - 1.0) > kMassTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "barycenter split needs a probability measure, mass is " << mass;
    throw NotProbability(msg.str());
  }
  const double half = 0.5 * mass;

  // B is the first atom at which the CDF jumps strictly above 1/2.
  std::size_t pivot = c.size() - 1;
  double below = 0.0;
  double run = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (run + c[k].weight > half) {
      pivot = k;
      break;
    }
    run += c[k].weight;
  }
  below = run;

  BarycenterSplit out;
  out.median = c[pivot].location[0];
  const double at_median = c[pivot].weight;
  std::vector<Atom> left;
  std::vector<Atom> right;
  for (std::size_t k = 0; k < pivot; ++k) left.push_back(c[k]);
  if (at_median > 0.0) {
    out.fraction_defined = true;
    out.fraction = std::clamp((half - below) / at_median, 0.0, 1.0);
    const double to_left = out.fraction * at_median;
    if (to_left > 0.0) left.push_back({c[pivot].location, to_left});
    if (at_median - to_left > 0.0) right.push_back({c[pivot].location, at_median - to_left});
  }
  for (std::size_t k = pivot + 1; k < c.size(); ++k) right.push_back(c[k]);
  out.left = DiscreteMeasure(1, std::move(left));
  out.right = DiscreteMeasure(1, std::move(right));
  return out;
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan,
                    const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const auto old = out.precision(17);
  out << "i,j,mass,cost\n";
  for (std::size_t i = 0; i < plan.rows; ++i)
    for (std::size_t j = 0; j < plan.cols; ++j)
      if (plan.at(i, j) > 0.0)
        out << i << ',' << j << ',' << plan.at(i, j) << ','
            << std::min(distance(mu[i].location, nu[j].location), kCostCap) << '\n';
  for (std::size_t i = 0; i < plan.rows; ++i)
    if (plan.source_slack[i] > 0.0) out << i << ",-," << plan.source_slack[i] << '\n';
  for (std::size_t j = 0; j < plan.cols; ++j)
    if (plan.sink_slack[j] > 0.0) out << "-," << j << ',' << plan.sink_slack[j] << '\n';
  out.precision(old);
}

}  // namespace mde
