#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mde {

/// A point of R^d. Coordinates must be finite wherever a measure stores them.
using Point = std::vector<double>;

double norm(std::span<const double> x);
double distance(std::span<const double> x, std::span<const double> y);

struct Atom {
  Point location;
  double weight = 0.0;
};

/// Finite nonnegative atomic measure on R^d.
///
/// Immutable after construction. The constructor rejects negative or
/// non-finite weights and locations of the wrong length. Duplicate locations
/// are allowed; `canonicalize()` merges them.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(int dim = 1);
  DiscreteMeasure(int dim, std::vector<Atom> atoms);

  /// Convenience for d = 1: locations and weights as parallel lists.
  static DiscreteMeasure on_line(std::span<const double> locations,
                                 std::span<const double> weights);
  static DiscreteMeasure dirac(Point location, double weight = 1.0);

  int dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  /// Sorted by location (lexicographic), exact-duplicate locations merged,
  /// zero-weight atoms dropped.
  DiscreteMeasure canonicalize() const;

  DiscreteMeasure scaled(double factor) const;
  /// Atom lists concatenated (not canonicalized).
  DiscreteMeasure plus(const DiscreteMeasure& other) const;

 private:
  int dim_;
  std::vector<Atom> atoms_;
};

double total_mass(const DiscreteMeasure& m);

/// Sum of w_i f(x_i). Throws NonFiniteValue if f returns NaN or inf.
double integrate(const DiscreteMeasure& m,
                 const std::function<double(const Point&)>& f);

/// Largest Euclidean norm over atoms of positive weight; 0 for the empty
/// measure.
double support_radius(const DiscreteMeasure& m);

DiscreteMeasure push_forward(const DiscreteMeasure& m,
                             const std::function<Point(const Point&)>& map);

/// True when both canonical forms agree location-by-location and weights
/// agree to `rel_tol` relative to the larger total mass.
bool same_atoms(const DiscreteMeasure& a, const DiscreteMeasure& b,
                double rel_tol = 1e-12);

struct VelocityAtom {
  Point location;
  Point velocity;
  double weight = 0.0;
};

/// Atomic nonnegative measure on R^d x R^d: the value V[mu] of a measure
/// vector field.
class VelocityMeasure {
 public:
  explicit VelocityMeasure(int dim = 1);
  VelocityMeasure(int dim, std::vector<VelocityAtom> atoms);

  int dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::vector<VelocityAtom>& atoms() const { return atoms_; }

  /// Sorted by (location, velocity), duplicates merged, zero weights dropped.
  VelocityMeasure canonicalize() const;

  /// The same atoms viewed as a measure on R^{2d}, coordinates (x, v).
  DiscreteMeasure joint() const;

 private:
  int dim_;
  std::vector<VelocityAtom> atoms_;
};

double total_mass(const VelocityMeasure& v);

/// First marginal pi_1 # V, canonicalized.
DiscreteMeasure spatial_marginal(const VelocityMeasure& v);

/// Image of V under (x, v) -> x + tau v.
DiscreteMeasure transport_image(const VelocityMeasure& v, double tau);

}  // namespace mde
