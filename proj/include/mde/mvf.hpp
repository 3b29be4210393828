#pragma once

#include <functional>
#include <string>

#include "mde/measures.hpp"

namespace mde {

/// Constants a measure vector field declares about itself. They are
/// hypotheses to be audited by the check_* functions, never inferred.
struct MvfConstants {
  double support_speed = 1.0;     // C_S: |v| <= C_S (1 + sup |x|)
  double flat_lipschitz = 1.0;    // C_F: ||V[mu] - V[nu]|| <= C_F ||mu - nu||
  double transport_growth = 0.0;  // C_H: constant of the x + tau v condition
};

/// A map mu -> V[mu] from measures on R^d to measures on R^d x R^d whose
/// first marginal is mu.
class MeasureVectorField {
 public:
  using Eval = std::function<VelocityMeasure(const DiscreteMeasure&)>;

  MeasureVectorField(std::string name, int dim, Eval eval, MvfConstants constants);

  VelocityMeasure operator()(const DiscreteMeasure& mu) const { return eval_(mu); }

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const MvfConstants& constants() const { return constants_; }

 private:
  std::string name_;
  int dim_;
  Eval eval_;
  MvfConstants constants_;
};

/// V[mu] = mu (x) delta_{v(x)}. Declares C_H = lip and C_F = 1 + lip.
MeasureVectorField lipschitz_field_mvf(int dim, std::function<Point(const Point&)> field,
                                       double lip_constant, double support_speed);

/// v(x) = offset + slope * x, a convenience over lipschitz_field_mvf with
/// Lipschitz constant |slope|.
MeasureVectorField affine_field_mvf(Point offset, double slope, double support_speed);

/// The 1D median-splitting field: mass left of B(mu) moves at -1, right of
/// it at +1, the atom at B(mu) is split by b_mu. Probability inputs only
/// (throws NotProbability). Declares C_S = 1, C_F = 1, C_H = 0.
MeasureVectorField barycenter_mvf();

/// Negative control: wraps `base` and halves every output weight, breaking
/// the marginal condition.
MeasureVectorField broken_marginal_mvf(const MeasureVectorField& base);

/// Growth / decay rate c(x, mu) with declared bound C_b and Lipschitz
/// constant C_L.
struct GrowthFunction {
  std::string name = "zero";
  std::function<double(const Point&, const DiscreteMeasure&)> rate =
      [](const Point&, const DiscreteMeasure&) { return 0.0; };
  double bound = 0.0;      // C_b
  double lipschitz = 0.0;  // C_L

  double operator()(const Point& x, const DiscreteMeasure& mu) const { return rate(x, mu); }
};

GrowthFunction zero_growth();
GrowthFunction constant_growth(double rate);
/// c(x) = offset + gradient . x. C_b must cover the working domain.
GrowthFunction affine_growth(double offset, Point gradient, double bound);
/// c(mu) = kappa (1 - total_mass(mu)).
GrowthFunction mass_coupled_growth(double kappa, double bound);

/// Nonnegative source s[mu] with declared flat-Lipschitz constant L and
/// support radius R.
struct SourceOperator {
  std::string name = "none";
  int dim = 1;
  std::function<DiscreteMeasure(const DiscreteMeasure&)> eval;
  double lipschitz = 0.0;  // L
  double radius = 0.0;     // R

  DiscreteMeasure operator()(const DiscreteMeasure& mu) const { return eval(mu); }
};

SourceOperator no_source(int dim);
/// s[mu] = sigma for every mu.
SourceOperator fixed_source(DiscreteMeasure sigma);
/// s[mu] = alpha * total_mass(mu) * sigma.
SourceOperator scaled_source(DiscreteMeasure sigma, double alpha);

struct MarginalReport {
  bool ok = false;
  double input_mass = 0.0;
  double output_mass = 0.0;
  double mass_deficit = 0.0;      // input - output
  double max_weight_error = 0.0;  // worst per-location discrepancy
  std::string detail;
};

/// pi_1 # V[mu] == mu atom by atom (weights within 1e-12 relative).
MarginalReport check_marginal(const MeasureVectorField& mvf, const DiscreteMeasure& mu);

struct V1Report {
  bool ok = false;
  double max_speed = 0.0;
  double max_radius = 0.0;
  double ratio = 0.0;  // max_speed / (1 + max_radius)
};

V1Report check_v1(const MeasureVectorField& mvf, const DiscreteMeasure& mu, double support_speed);

struct V2Report {
  double lhs = 0.0;            // ||V[mu] - V[nu]||_{BL*} on R^{2d}
  double base = 0.0;           // ||mu - nu||_{BL*}
  double rhs = 0.0;            // C_F * base
  double ratio = 0.0;          // lhs / base (0 when base == 0)
};

V2Report check_v2(const MeasureVectorField& mvf, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu);

struct V3Report {
  double lhs = 0.0;   // flat distance of the (x + tau v) images
  double base = 0.0;  // ||mu - nu||_{BL*}
  double rhs = 0.0;   // (1 + C_H tau) base
  double gap = 0.0;   // rhs - lhs
};

V3Report check_v3(const MeasureVectorField& mvf, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu, double tau);

}  // namespace mde
