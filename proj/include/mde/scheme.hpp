#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mde/measures.hpp"
#include "mde/mesh.hpp"
#include "mde/mvf.hpp"

namespace mde {

/// Everything needed to pose  d/dt mu = V[mu] + c(., mu) mu + s[mu]  on
/// [0, T] from a compactly supported initial measure.
struct Scenario {
  std::string name;
  MeasureVectorField mvf;
  GrowthFunction growth;
  SourceOperator source;
  DiscreteMeasure initial;
  double horizon = 1.0;

  int dim() const { return initial.dim(); }
  /// max(R, R_0): source radius against initial support radius.
  double base_radius() const;
  /// A priori support radius e^{C_S T}(R~ + 2) - 1 of every scheme state.
  double support_bound() const;
  /// A priori speed bound C_S e^{C_S T}(R~ + 2) of every velocity used.
  double speed_bound() const;
  /// Smallest N for which both a priori bounds fit inside [-N, N]^d.
  int minimal_n() const;

  /// Throws mde::Error on dimension mismatches or T <= 0.
  void validate() const;
};

/// mu_0^N = A_N^x(mu_0).
DiscreteMeasure init(const Scenario& scenario, const Mesh& mesh);

struct StepResult {
  DiscreteMeasure state;
  double expected_mass = 0.0;  // tau m(A s) + sum m_ij e^{c tau}, summed per part
  double max_speed = 0.0;      // largest lattice velocity carrying mass
  std::size_t phase_cells = 0;
};

/// One lattice step of length tau in [0, 1/N] from `state`:
///   tau * A_N^x(s[state]) + sum_ij m_ij delta_{x_i + tau v_j} exp(c(x_i, state) tau)
/// with m_ij the cell masses of A_N^v(V[state]). Emitted atoms are not snapped.
StepResult step_detailed(const DiscreteMeasure& state, double tau, const Scenario& scenario,
                         const Mesh& mesh);

DiscreteMeasure step(const DiscreteMeasure& state, double tau, const Scenario& scenario,
                     const Mesh& mesh);

struct Diagnostics {
  double time = 0.0;
  double mass = 0.0;
  double support_radius = 0.0;
  std::size_t atom_count = 0;
  double max_speed = 0.0;  // speed used by the step leaving this state
  double wall_ms = 0.0;
};

struct Trajectory {
  Mesh mesh{1, 1, 1.0};
  std::vector<DiscreteMeasure> states;  // one per mesh time point
  std::vector<Diagnostics> diagnostics;
  /// tau-samples at the midpoint of each interval, when requested.
  std::vector<double> sample_times;
  std::vector<DiscreteMeasure> samples;

  const std::vector<double>& times() const { return mesh.time_points(); }
  /// State at the last mesh time <= t.
  const DiscreteMeasure& at_or_before(double t) const;
  const DiscreteMeasure& final_state() const { return states.back(); }
};

struct SolveOptions {
  bool record_intermediate = false;
  /// Restart from this state as-is (no projection); defaults to A_N^x(mu_0).
  std::optional<DiscreteMeasure> start_state;
  /// Overrides the scenario horizon.
  std::optional<double> horizon;
};

/// Runs the recursion over every mesh interval. AtomOutsideMesh is rethrown
/// with the failing time and a suggested N from the a priori bounds.
Trajectory solve(const Scenario& scenario, int n, const SolveOptions& options = {});

struct ConvergenceRow {
  int n = 0;
  int n_fine = 0;
  double time = 0.0;
  double distance = 0.0;
  double order = 0.0;  // log2(previous distance / distance); NaN for the first row per time
};

/// flat_distance(mu_t^N, mu_t^{N'}) for consecutive pairs of `n_list` at each
/// probe time, with log2 successive ratios.
std::vector<ConvergenceRow> convergence_study(const Scenario& scenario,
                                              const std::vector<int>& n_list,
                                              const std::vector<double>& probe_times);

}  // namespace mde
