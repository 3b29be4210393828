#include "mde/mvf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mde/errors.hpp"
#include "mde/metrics.hpp"

namespace mde {

MeasureVectorField::MeasureVectorField(std::string name, int dim, Eval eval,
                                       MvfConstants constants)
    : name_(std::move(name)), dim_(dim), eval_(std::move(eval)), constants_(constants) {}

MeasureVectorField lipschitz_field_mvf(int dim, std::function<Point(const Point&)> field,
                                       double lip_constant, double support_speed) {
  auto eval = [dim, field = std::move(field)](const DiscreteMeasure& mu) {
    if (mu.dim() != dim) throw DimensionMismatch("measure dimension does not match the field");
    std::vector<VelocityAtom> atoms;
    atoms.reserve(mu.size());
    for (const auto& a : mu.atoms()) atoms.push_back({a.location, field(a.location), a.weight});
    return VelocityMeasure(dim, std::move(atoms));
  };
  return MeasureVectorField("lipschitz_field", dim, std::move(eval),
                            {support_speed, 1.0 + lip_constant, lip_constant});
}

MeasureVectorField affine_field_mvf(Point offset, double slope, double support_speed) {
  const int dim = static_cast<int>(offset.size());
  auto field = [offset = std::move(offset), slope](const Point& x) {
    Point v(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) v[k] = offset[k] + slope * x[k];
    return v;
  };
  return lipschitz_field_mvf(dim, std::move(field), std::abs(slope), support_speed);
}

MeasureVectorField barycenter_mvf() {
  auto eval = [](const DiscreteMeasure& mu) {
    const auto split = barycenter_split(mu);
    std::vector<VelocityAtom> atoms;
    for (const auto& a : split.left.atoms()) atoms.push_back({a.location, Point{-1.0}, a.weight});
    for (const auto& a : split.right.atoms()) atoms.push_back({a.location, Point{1.0}, a.weight});
    return VelocityMeasure(1, std::move(atoms));
  };
  return MeasureVectorField("barycenter", 1, std::move(eval), {1.0, 1.0, 0.0});
}

MeasureVectorField broken_marginal_mvf(const MeasureVectorField& base) {
  auto eval = [base](const DiscreteMeasure& mu) {
    auto v = base(mu);
    std::vector<VelocityAtom> atoms = v.atoms();
    for (auto& a : atoms) a.weight *= 0.5;
    return VelocityMeasure(v.dim(), std::move(atoms));
  };
  return MeasureVectorField("broken_marginal", base.dim(), std::move(eval), base.constants());
}

GrowthFunction zero_growth() { return GrowthFunction{}; }

GrowthFunction constant_growth(double rate) {
  GrowthFunction g;
  g.name = "constant";
  g.rate = [rate](const Point&, const DiscreteMeasure&) { return rate; };
  g.bound = std::abs(rate);
  g.lipschitz = 0.0;
  return g;
}

GrowthFunction affine_growth(double offset, Point gradient, double bound) {
  GrowthFunction g;
  g.name = "affine";
  g.lipschitz = norm(gradient);
  g.bound = bound;
  g.rate = [offset, gradient = std::move(gradient)](const Point& x, const DiscreteMeasure&) {
    double c = offset;
    for (std::size_t k = 0; k < x.size(); ++k) c += gradient[k] * x[k];
    return c;
  };
  return g;
}

GrowthFunction mass_coupled_growth(double kappa, double bound) {
  GrowthFunction g;
  g.name = "mass_coupled";
  g.lipschitz = std::abs(kappa);
  g.bound = bound;
  g.rate = [kappa](const Point&, const DiscreteMeasure& mu) { return kappa * (1.0 - total_mass(mu)); };
  return g;
}

SourceOperator no_source(int dim) {
  SourceOperator s;
  s.dim = dim;
  s.eval = [dim](const DiscreteMeasure&) { return DiscreteMeasure(dim); };
  return s;
}

SourceOperator fixed_source(DiscreteMeasure sigma) {
  SourceOperator s;
  s.name = "fixed";
  s.dim = sigma.dim();
  s.radius = support_radius(sigma);
  s.lipschitz = 0.0;
  s.eval = [sigma = std::move(sigma)](const DiscreteMeasure&) { return sigma; };
  return s;
}

SourceOperator scaled_source(DiscreteMeasure sigma, double alpha) {
  if (!(alpha >= 0.0)) throw Error("source scale must be nonnegative");
  SourceOperator s;
  s.name = "scaled";
  s.dim = sigma.dim();
  s.radius = support_radius(sigma);
  s.lipschitz = alpha * total_mass(sigma);
  s.eval = [sigma = std::move(sigma), alpha](const DiscreteMeasure& mu) {
    return sigma.scaled(alpha * total_mass(mu));
  };
  return s;
}

MarginalReport check_marginal(const MeasureVectorField& mvf, const DiscreteMeasure& mu) {
  MarginalReport r;
  const auto marginal = spatial_marginal(mvf(mu));
  const auto expected = mu.canonicalize();
  r.input_mass = total_mass(expected);
  r.output_mass = total_mass(marginal);
  r.mass_deficit = r.input_mass - r.output_mass;

  std::map<Point, double> diff;
  for (const auto& a : expected.atoms()) diff[a.location] += a.weight;
  for (const auto& a : marginal.atoms()) diff[a.location] -= a.weight;
  const Point* worst = nullptr;
  for (const auto& [p, d] : diff) {
    if (std::abs(d) > r.max_weight_error) {
      r.max_weight_error = std::abs(d);
      worst = &p;
    }
  }
  const double tol = 1e-12 * std::max(r.input_mass, 1e-300);
  r.ok = r.max_weight_error <= tol;
  if (!r.ok) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "marginal differs from input: mass deficit " << r.mass_deficit
        << ", worst weight error " << r.max_weight_error;
    if (worst != nullptr) {
      msg << " at (";
      for (std::size_t k = 0; k < worst->size(); ++k) msg << (k ? "," : "") << (*worst)[k];
      msg << ")";
    }
    r.detail = msg.str();
  }
  return r;
}

V1Report check_v1(const MeasureVectorField& mvf, const DiscreteMeasure& mu, double support_speed) {
  V1Report r;
  const VelocityMeasure field = mvf(mu);
  for (const auto& a : field.atoms()) {
    if (a.weight <= 0.0) continue;
    r.max_speed = std::max(r.max_speed, norm(a.velocity));
    r.max_radius = std::max(r.max_radius, norm(a.location));
  }
  r.ratio = r.max_speed / (1.0 + r.max_radius);
  r.ok = r.max_speed <= support_speed * (1.0 + r.max_radius) * (1.0 + 1e-12);
  return r;
}

V2Report check_v2(const MeasureVectorField& mvf, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu) {
  V2Report r;
  r.lhs = flat_distance(mvf(mu).joint(), mvf(nu).joint()).distance;
  r.base = flat_distance(mu, nu).distance;
  r.rhs = mvf.constants().flat_lipschitz * r.base;
  r.ratio = r.base > 0.0 ? r.lhs / r.base : 0.0;
  return r;
}

V3Report check_v3(const MeasureVectorField& mvf, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu, double tau) {
  if (tau < 0.0) throw Error("check_v3 needs tau >= 0");
  V3Report r;
  r.lhs = flat_distance(transport_image(mvf(mu), tau), transport_image(mvf(nu), tau)).distance;
  r.base = flat_distance(mu, nu).distance;
  r.rhs = (1.0 + mvf.constants().transport_growth * tau) * r.base;
  r.gap = r.rhs - r.lhs;
  return r;
}

}  // namespace mde
