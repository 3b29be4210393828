#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mde/measures.hpp"
#include "mde/scheme.hpp"

namespace mde {

/// Compactly supported smooth test function with its gradient.
struct TestFunction {
  std::string name;
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  double support = 0.0;  // f and grad f vanish outside B(0, support)
};

/// exp(1 - 1 / (1 - |x/rho|^2)) inside B(0, rho), zero outside.
TestFunction bump_function(double rho);

/// Equal to 1 on B(0, inner), smoothly decaying to 0 at `outer`, zero
/// beyond. Built from the standard exp(-1/s) transition.
TestFunction plateau_function(double inner, double outer);

/// Largest |grad f - centered difference| over `samples` random points of
/// B(0, support); h is the difference step.
double gradient_mismatch(const TestFunction& f, int dim, int samples, unsigned long long seed,
                         double h = 1e-5);

struct ResidualReport {
  int n = 0;
  double time = 0.0;
  double lhs = 0.0;
  double rhs_transport = 0.0;
  double rhs_growth = 0.0;
  double rhs_source = 0.0;
  double residual = 0.0;

  double rhs_total() const { return rhs_transport + rhs_growth + rhs_source; }
};

/// Weak-form defect of a trajectory at the mesh time nearest t:
///   lhs = int f d(mu_t - mu_0)
///   rhs = sum_l tau_l [ int grad f . v dV[mu_l] + int f c(., mu_l) dmu_l + int f ds[mu_l] ]
/// with left-endpoint quadrature over the mesh intervals.
ResidualReport weak_residual(const Trajectory& traj, const Scenario& scenario,
                             const TestFunction& f, double t);

struct ContinuityRow {
  double time = 0.0;
  double distance = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // exp(C_hat t)
};

struct ContinuityReport {
  int n = 0;
  double initial_distance = 0.0;
  double fitted_exponent = 0.0;  // C_hat = max over t > 0 of log r(t) / t
  std::vector<ContinuityRow> rows;
};

/// Solves from mu0 and nu0 at resolution N and reports the growth of their
/// flat distance relative to ||mu0^N - nu0^N|| at each probe time. Throws
/// InitialDataIdentical when the projected data are within 1e-13.
ContinuityReport continuity_experiment(const Scenario& scenario, const DiscreteMeasure& mu0,
                                       const DiscreteMeasure& nu0, int n,
                                       const std::vector<double>& probe_times);

/// flat distance between the state at t1 + t2 of a single run and the state
/// obtained by restarting from the run's state at t1 and running t2 more.
/// `perturb`, when given, is applied to the restart state. Throws NonMeshTime.
double semigroup_check(const Scenario& scenario, int n, double t1, double t2,
                       const std::function<DiscreteMeasure(const DiscreteMeasure&)>& perturb = {});

}  // namespace mde
