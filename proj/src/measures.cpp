#include "mde/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mde/errors.hpp"

namespace mde {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

void check_point(const Point& p, int dim, std::size_t index, const char* what) {
  if (static_cast<int>(p.size()) != dim) {
    std::ostringstream msg;
    msg << what << " of atom " << index << " has " << p.size()
        << " coordinates, expected " << dim;
    throw DimensionMismatch(msg.str());
  }
  for (double c : p) {
    if (!std::isfinite(c)) {
      std::ostringstream msg;
      msg << what << " of atom " << index << " is not finite";
      throw InvalidMeasure(msg.str());
    }
  }
}

void check_weight(double w, std::size_t index) {
  if (!std::isfinite(w) || w < 0.0) {
    std::ostringstream msg;
    msg << "atom " << index << " has invalid weight " << w
        << " (weights must be finite and nonnegative)";
    throw InvalidMeasure(msg.str());
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dim) : dim_(dim) {
  if (dim <= 0) throw InvalidMeasure("measure dimension must be positive");
}

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<Atom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
  if (dim <= 0) throw InvalidMeasure("measure dimension must be positive");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    check_point(atoms_[i].location, dim_, i, "location");
    check_weight(atoms_[i].weight, i);
  }
}

DiscreteMeasure DiscreteMeasure::on_line(std::span<const double> locations,
                                         std::span<const double> weights) {
  if (locations.size() != weights.size())
    throw InvalidMeasure("locations and weights differ in length");
  std::vector<Atom> atoms;
  atoms.reserve(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i)
    atoms.push_back({Point{locations[i]}, weights[i]});
  return DiscreteMeasure(1, std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::dirac(Point location, double weight) {
  const int dim = static_cast<int>(location.size());
  return DiscreteMeasure(dim, {Atom{std::move(location), weight}});
}

DiscreteMeasure DiscreteMeasure::canonicalize() const {
  std::vector<Atom> sorted = atoms_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Atom& a, const Atom& b) {
                     return a.location < b.location;
                   });
  std::vector<Atom> merged;
  merged.reserve(sorted.size());
  for (auto& a : sorted) {
    if (!merged.empty() && merged.back().location == a.location) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(std::move(a));
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.weight == 0.0; });
  DiscreteMeasure out(dim_);
  out.atoms_ = std::move(merged);
  return out;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (!std::isfinite(factor) || factor < 0.0)
    throw InvalidMeasure("scale factor must be finite and nonnegative");
  DiscreteMeasure out(*this);
  for (auto& a : out.atoms_) a.weight *= factor;
  return out;
}

DiscreteMeasure DiscreteMeasure::plus(const DiscreteMeasure& other) const {
  if (other.dim_ != dim_) throw DimensionMismatch("cannot add measures of different dimension");
  DiscreteMeasure out(*this);
  out.atoms_.insert(out.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  return out;
}

double total_mass(const DiscreteMeasure& m) {
  double s = 0.0;
  for (const auto& a : m.atoms()) s += a.weight;
  return s;
}

double integrate(const DiscreteMeasure& m,
                 const std::function<double(const Point&)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = f(m[i].location);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrand is not finite at atom " << i;
      throw NonFiniteValue(msg.str());
    }
    s += m[i].weight * v;
  }
  return s;
}

double support_radius(const DiscreteMeasure& m) {
  double r = 0.0;
  for (const auto& a : m.atoms())
    if (a.weight > 0.0) r = std::max(r, norm(a.location));
  return r;
}

DiscreteMeasure push_forward(const DiscreteMeasure& m,
                             const std::function<Point(const Point&)>& map) {
  std::vector<Atom> atoms;
  atoms.reserve(m.size());
  int dim = m.dim();
  for (const auto& a : m.atoms()) {
    Point y = map(a.location);
    dim = static_cast<int>(y.size());
    atoms.push_back({std::move(y), a.weight});
  }
  return DiscreteMeasure(dim, std::move(atoms));
}

bool same_atoms(const DiscreteMeasure& a, const DiscreteMeasure& b,
                double rel_tol) {
  if (a.dim() != b.dim()) return false;
  const auto ca = a.canonicalize();
  const auto cb = b.canonicalize();
  if (ca.size() != cb.size()) return false;
  const double scale = std::max({total_mass(ca), total_mass(cb), 1e-300});
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i].location != cb[i].location) return false;
    if (std::abs(ca[i].weight - cb[i].weight) > rel_tol * scale) return false;
  }
  return true;
}

VelocityMeasure::VelocityMeasure(int dim) : dim_(dim) {
  if (dim <= 0) throw InvalidMeasure("measure dimension must be positive");
}

VelocityMeasure::VelocityMeasure(int dim, std::vector<VelocityAtom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
  if (dim <= 0) throw InvalidMeasure("measure dimension must be positive");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    check_point(atoms_[i].location, dim_, i, "location");
    check_point(atoms_[i].velocity, dim_, i, "velocity");
    check_weight(atoms_[i].weight, i);
  }
}

VelocityMeasure VelocityMeasure::canonicalize() const {
  std::vector<VelocityAtom> sorted = atoms_;
  auto key_less = [](const VelocityAtom& a, const VelocityAtom& b) {
    if (a.location != b.location) return a.location < b.location;
    return a.velocity < b.velocity;
  };
  std::stable_sort(sorted.begin(), sorted.end(), key_less);
  std::vector<VelocityAtom> merged;
  for (auto& a : sorted) {
    if (!merged.empty() && merged.back().location == a.location &&
        merged.back().velocity == a.velocity) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(std::move(a));
    }
  }
  std::erase_if(merged, [](const VelocityAtom& a) { return a.weight == 0.0; });
  VelocityMeasure out(dim_);
  out.atoms_ = std::move(merged);
  return out;
}

DiscreteMeasure VelocityMeasure::joint() const {
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    Point xv = a.location;
    xv.insert(xv.end(), a.velocity.begin(), a.velocity.end());
    atoms.push_back({std::move(xv), a.weight});
  }
  return DiscreteMeasure(2 * dim_, std::move(atoms));
}

double total_mass(const VelocityMeasure& v) {
  double s = 0.0;
  for (const auto& a : v.atoms()) s += a.weight;
  return s;
}

DiscreteMeasure spatial_marginal(const VelocityMeasure& v) {
  std::vector<Atom> atoms;
  atoms.reserve(v.size());
  for (const auto& a : v.atoms()) atoms.push_back({a.location, a.weight});
  return DiscreteMeasure(v.dim(), std::move(atoms)).canonicalize();
}

DiscreteMeasure transport_image(const VelocityMeasure& v, double tau) {
  std::vector<Atom> atoms;
  atoms.reserve(v.size());
  for (const auto& a : v.atoms()) {
    Point y = a.location;
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += tau * a.velocity[k];
    atoms.push_back({std::move(y), a.weight});
  }
  return DiscreteMeasure(v.dim(), std::move(atoms));
}

}  // namespace mde
