#include "mde/scheme.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "mde/errors.hpp"
#include "mde/metrics.hpp"

namespace mde {

double Scenario::base_radius() const {
  return std::max(source.radius, support_radius(initial));
}

double Scenario::support_bound() const {
  return std::exp(mvf.constants().support_speed * horizon) * (base_radius() + 2.0) - 1.0;
}

double Scenario::speed_bound() const {
  return mvf.constants().support_speed * std::exp(mvf.constants().support_speed * horizon) *
         (base_radius() + 2.0);
}

int Scenario::minimal_n() const {
  return static_cast<int>(std::ceil(std::max({support_bound(), speed_bound(), 1.0})));
}

void Scenario::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error("scenario horizon must be positive");
  if (mvf.dim() != dim()) throw DimensionMismatch("field and initial measure differ in dimension");
  if (source.dim != dim()) throw DimensionMismatch("source and initial measure differ in dimension");
}

DiscreteMeasure init(const Scenario& scenario, const Mesh& mesh) {
  return grid_project_x(scenario.initial, mesh);
}

StepResult step_detailed(const DiscreteMeasure& state, double tau, const Scenario& scenario,
                         const Mesh& mesh) {
  if (tau < 0.0 || tau > mesh.dt() * (1.0 + 1e-12))
    throw Error("step length must lie in [0, 1/N]");
  const int dim = state.dim();
  StepResult out;
  std::vector<Atom> atoms;

  double transport_mass = 0.0;
  if (!state.empty()) {
    const auto cells = phase_cells(scenario.mvf(state), mesh);
    out.phase_cells = cells.size();
    atoms.reserve(cells.size());
    const CellIndex* rate_cell = nullptr;
    double factor = 1.0;
    Point x;
    for (const auto& cell : cells) {
      // Cells arrive sorted by space index, so the rate is reused per x_i.
      if (rate_cell == nullptr || *rate_cell != cell.x) {
        rate_cell = &cell.x;
        x = space_point(cell.x, mesh);
        factor = std::exp(scenario.growth(x, state) * tau);
      }
      const Point v = velocity_point(cell.v, mesh);
      out.max_speed = std::max(out.max_speed, norm(v));
      Point y = x;
      for (int k = 0; k < dim; ++k) y[k] += tau * v[k];
      const double w = cell.mass * factor;
      transport_mass += w;
      atoms.push_back({std::move(y), w});
    }
  }

  double source_mass = 0.0;
  if (tau > 0.0) {
    const auto src = grid_project_x(scenario.source(state), mesh);
    for (const auto& a : src.atoms()) {
      source_mass += a.weight;
      atoms.push_back({a.location, tau * a.weight});
    }
  }
  out.expected_mass = tau * source_mass + transport_mass;
  out.state = DiscreteMeasure(dim, std::move(atoms)).canonicalize();
  return out;
}

DiscreteMeasure step(const DiscreteMeasure& state, double tau, const Scenario& scenario,
                     const Mesh& mesh) {
  return step_detailed(state, tau, scenario, mesh).state;
}

const DiscreteMeasure& Trajectory::at_or_before(double t) const {
  return states.at(mesh.index_at_or_before(t));
}

namespace {

Diagnostics diagnose(const DiscreteMeasure& m, double t) {
  Diagnostics d;
  d.time = t;
  d.mass = total_mass(m);
  d.support_radius = support_radius(m);
  d.atom_count = m.size();
  return d;
}

[[noreturn]] void rethrow_with_context(const AtomOutsideMesh& e, const Scenario& scenario,
                                       double t) {
  std::ostringstream msg;
  const int suggested = std::max(scenario.minimal_n(), e.n + 1);
  msg << e.what() << " (at t = " << t << ", N = " << e.n << "; a priori bounds suggest N >= "
      << suggested << ")";
  AtomOutsideMesh out(e.grid, e.atom, e.coordinate, e.n, msg.str());
  out.suggested_n = suggested;
  out.time = t;
  throw out;
}

}  // namespace

Trajectory solve(const Scenario& scenario, int n, const SolveOptions& options) {
  scenario.validate();
  const double horizon = options.horizon.value_or(scenario.horizon);
  Trajectory traj;
  traj.mesh = Mesh(n, scenario.dim(), horizon);
  const auto& times = traj.mesh.time_points();
  const auto& steps = traj.mesh.steps();

  DiscreteMeasure state(scenario.dim());
  try {
    state = options.start_state ? *options.start_state : init(scenario, traj.mesh);
  } catch (const AtomOutsideMesh& e) {
    rethrow_with_context(e, scenario, 0.0);
  }
  traj.states.reserve(times.size());
  traj.diagnostics.reserve(times.size());
  traj.states.push_back(state);
  traj.diagnostics.push_back(diagnose(state, times[0]));

  for (std::size_t l = 0; l < steps.size(); ++l) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if (options.record_intermediate) {
        traj.sample_times.push_back(times[l] + 0.5 * steps[l]);
        traj.samples.push_back(step(state, 0.5 * steps[l], scenario, traj.mesh));
      }
      auto res = step_detailed(state, steps[l], scenario, traj.mesh);
      traj.diagnostics.back().max_speed = res.max_speed;
      state = std::move(res.state);
    } catch (const AtomOutsideMesh& e) {
      rethrow_with_context(e, scenario, times[l]);
    }
    const auto stop = std::chrono::steady_clock::now();
    traj.states.push_back(state);
    auto d = diagnose(state, times[l + 1]);
    d.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    traj.diagnostics.push_back(d);
  }
  return traj;
}

std::vector<ConvergenceRow> convergence_study(const Scenario& scenario,
                                              const std::vector<int>& n_list,
                                              const std::vector<double>& probe_times) {
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw Error("convergence study needs an ascending N list");
  // Resolutions are independent; solve them concurrently.
  std::vector<std::future<Trajectory>> pending;
  for (int n : n_list)
    pending.push_back(std::async(std::launch::async, [&scenario, n] { return solve(scenario, n); }));
  std::vector<Trajectory> runs;
  runs.reserve(n_list.size());
  for (auto& p : pending) runs.push_back(p.get());

  std::vector<ConvergenceRow> rows;
  for (double t : probe_times) {
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
      ConvergenceRow row;
      row.n = n_list[k];
      row.n_fine = n_list[k + 1];
      row.time = t;
      row.distance = flat_distance(runs[k].at_or_before(t), runs[k + 1].at_or_before(t)).distance;
      row.order = std::log2(previous / row.distance);
      previous = row.distance;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace mde
