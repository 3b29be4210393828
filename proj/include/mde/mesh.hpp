#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mde/measures.hpp"

namespace mde {

/// Discretization parameters of the lattice scheme at resolution N.
///
/// Time step 1/N, velocity step 1/N, space step 1/N^2. The spatial lattice is
/// (Z^d / N^2) intersected with [-N, N]^d and the velocity lattice is
/// (Z^d / N) intersected with [-N, N]^d. Neither lattice is ever stored; cells
/// are addressed by integer multi-indices.
///
/// Time points are l/N for l = 0..floor(T N), followed by T itself when T N is
/// not an integer, so every interval has length at most 1/N and the last
/// point is exactly T.
class Mesh {
 public:
  Mesh(int n, int dim, double horizon);

  int n() const { return n_; }
  int dim() const { return dim_; }
  double horizon() const { return horizon_; }

  double dt() const { return 1.0 / n_; }
  double dv() const { return 1.0 / n_; }
  double dx() const { return 1.0 / (static_cast<double>(n_) * n_); }

  /// Lattice points per unit length: N^2 in space, N in velocity.
  std::int64_t space_scale() const { return static_cast<std::int64_t>(n_) * n_; }
  std::int64_t velocity_scale() const { return n_; }

  const std::vector<double>& time_points() const { return times_; }
  /// steps()[l] = t_{l+1} - t_l; full steps are exactly 1.0 / N.
  const std::vector<double>& steps() const { return steps_; }
  std::size_t num_steps() const { return steps_.size(); }

  /// Index of the last time point <= t (clamped to the mesh).
  std::size_t index_at_or_before(double t) const;
  std::size_t nearest_index(double t) const;
  bool is_mesh_time(double t, double tol = 1e-9) const;

 private:
  int n_;
  int dim_;
  double horizon_;
  std::vector<double> times_;
  std::vector<double> steps_;
};

/// floor(coord * scale), except that values within 1e-12 (relative) of an
/// integer are rounded to it.
std::int64_t lattice_index(double coord, std::int64_t scale);

using CellIndex = std::vector<std::int64_t>;

/// Cell multi-index of x on the spatial lattice; throws AtomOutsideMesh when
/// a coordinate leaves [-N, N]. A coordinate equal to N lands on the last
/// lattice point.
CellIndex space_cell(const Point& x, const Mesh& mesh, std::size_t atom = 0);
CellIndex velocity_cell(const Point& v, const Mesh& mesh, std::size_t atom = 0);

Point space_point(const CellIndex& cell, const Mesh& mesh);
Point velocity_point(const CellIndex& cell, const Mesh& mesh);

/// Mass aggregated on one (space cell, velocity cell) pair.
struct PhaseCell {
  CellIndex x;
  CellIndex v;
  double mass = 0.0;
};

/// Occupied cells of A_N^v(V), sorted by (x, v) index. Zero-mass cells are
/// omitted.
std::vector<PhaseCell> phase_cells(const VelocityMeasure& v, const Mesh& mesh);

/// A_N^x: mass of each half-open cell x_i + [0, 1/N^2)^d moved to x_i.
/// Output is canonical (sorted by cell).
DiscreteMeasure grid_project_x(const DiscreteMeasure& m, const Mesh& mesh);

/// A_N^v: location snapped to the space lattice, velocity to the velocity
/// lattice, coincident cells merged.
VelocityMeasure grid_project_xv(const VelocityMeasure& v, const Mesh& mesh);

}  // namespace mde
