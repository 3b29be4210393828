#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mde/measures.hpp"

namespace mde {

/// Optimal partial coupling between the atoms of mu (rows) and nu (columns).
/// Row and column order follow the input atom order.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> mass;          // row-major rows x cols
  std::vector<double> source_slack;  // mass of mu removed, per row
  std::vector<double> sink_slack;    // mass of nu removed, per column

  double at(std::size_t i, std::size_t j) const { return mass[i * cols + j]; }
  double transported() const;
};

struct FlatResult {
  double distance = 0.0;
  TransportPlan plan;
};

/// Flat (bounded-Lipschitz) distance ||mu - nu||_{BL*} between nonnegative
/// atomic measures, computed as a partial-transport min-cost flow: moving a
/// unit from x to y costs min(|x - y|, 2) and discarding a unit on either side
/// costs 1. Throws DimensionMismatch.
FlatResult flat_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Balanced optimal transport cost with |x - y| and no removal (W1 for equal
/// masses). Throws MassMismatch if masses differ by more than 1e-12 relative.
FlatResult balanced_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Feasibility audit of a plan: marginal equalities and nonnegativity.
bool plan_is_consistent(const TransportPlan& plan, const DiscreteMeasure& mu,
                        const DiscreteMeasure& nu, double tol = 1e-12);

/// Test function psi sampled on the union of both supports.
struct DualCertificate {
  std::vector<Point> points;
  std::vector<double> values;

  /// |psi| <= 1 and |psi(p) - psi(q)| <= |p - q| on every pair, up to tol.
  bool feasible(double tol = 1e-9) const;
  /// sum psi d(mu - nu) evaluated on the stored points.
  double pairing(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const;
};

struct DualResult {
  double value = 0.0;
  DualCertificate certificate;
};

/// sup { int psi d(mu - nu) : |psi| <= 1, Lip(psi) <= 1 } as a finite LP over
/// the union support, solved by dense simplex with every pairwise Lipschitz
/// constraint kept. Independent of flat_distance.
DualResult flat_distance_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Generalized inverse CDF of a 1D measure, normalized to mass 1:
/// smallest atom location whose cumulative weight strictly exceeds y.
double quantile(const DiscreteMeasure& mu, double y);

/// W1 between 1D measures of equal mass via the integral of
/// |F^{-1} - G^{-1}| over [0, 1], evaluated exactly on the merged step
/// breakpoints and scaled by the common mass.
double wasserstein1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Median split of a 1D probability measure.
struct BarycenterSplit {
  double median = 0.0;          // B(mu) = sup { x : mu(-inf, x] <= 1/2 }
  double fraction = 0.0;        // b_mu; meaningless when !fraction_defined
  bool fraction_defined = false;
  DiscreteMeasure left{1};
  DiscreteMeasure right{1};
};

/// Throws NotProbability (mass not 1 within 1e-12) or EmptyMeasure.
BarycenterSplit barycenter_split(const DiscreteMeasure& mu);

/// `i,j,mass,cost` rows for transported mass, then `i,-,slack` and
/// `-,j,slack` rows for removals.
void write_plan_csv(std::ostream& out, const TransportPlan& plan,
                    const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace mde
