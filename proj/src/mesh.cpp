#include "mde/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mde/errors.hpp"

namespace mde {

Mesh::Mesh(int n, int dim, double horizon) : n_(n), dim_(dim), horizon_(horizon) {
  if (n <= 0) throw Error("mesh resolution N must be positive");
  if (dim <= 0) throw Error("mesh dimension must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error("horizon T must be positive");

  const double steps_exact = horizon * n;
  auto full = static_cast<std::int64_t>(std::floor(steps_exact));
  double remainder = steps_exact - static_cast<double>(full);
  if (remainder > 1.0 - 1e-9) {
    ++full;
    remainder = 0.0;
  }
  const double dt = 1.0 / n;
  times_.reserve(static_cast<std::size_t>(full) + 2);
  for (std::int64_t l = 0; l <= full; ++l) times_.push_back(static_cast<double>(l) / n);
  steps_.assign(static_cast<std::size_t>(full), dt);
  if (remainder > 1e-9) {
    times_.push_back(horizon);
    steps_.push_back(horizon - times_[times_.size() - 2]);
  } else {
    times_.back() = horizon;
  }
}

std::size_t Mesh::index_at_or_before(double t) const {
  if (t <= 0.0) return 0;
  auto it = std::upper_bound(times_.begin(), times_.end(), t + 1e-12);
  return static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
}

std::size_t Mesh::nearest_index(double t) const {
  std::size_t best = 0;
  for (std::size_t l = 1; l < times_.size(); ++l)
    if (std::abs(times_[l] - t) < std::abs(times_[best] - t)) best = l;
  return best;
}

bool Mesh::is_mesh_time(double t, double tol) const {
  return std::any_of(times_.begin(), times_.end(),
                     [&](double s) { return std::abs(s - t) <= tol; });
}

std::int64_t lattice_index(double coord, std::int64_t scale) {
  const double s = coord * static_cast<double>(scale);
  const double r = std::round(s);
  if (std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s)))
    return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(s));
}

namespace {

CellIndex cell_of(const Point& p, const Mesh& mesh, std::int64_t scale,
                  AtomOutsideMesh::Grid grid, std::size_t atom) {
  const double box = mesh.n();
  const std::int64_t max_index = static_cast<std::int64_t>(mesh.n()) * scale;
  CellIndex cell(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double c = p[k];
    if (std::abs(c) > box * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << (grid == AtomOutsideMesh::Grid::Space ? "location" : "velocity")
          << " coordinate " << c << " of atom " << atom << " lies outside [-" << mesh.n()
          << ", " << mesh.n() << "]; increase N";
      throw AtomOutsideMesh(grid, atom, c, mesh.n(), msg.str());
    }
    cell[k] = std::clamp(lattice_index(c, scale), -max_index, max_index);
  }
  return cell;
}

Point point_of(const CellIndex& cell, std::int64_t scale) {
  Point p(cell.size());
  for (std::size_t k = 0; k < cell.size(); ++k)
    p[k] = static_cast<double>(cell[k]) / static_cast<double>(scale);
  return p;
}

}  // namespace

CellIndex space_cell(const Point& x, const Mesh& mesh, std::size_t atom) {
  return cell_of(x, mesh, mesh.space_scale(), AtomOutsideMesh::Grid::Space, atom);
}

CellIndex velocity_cell(const Point& v, const Mesh& mesh, std::size_t atom) {
  return cell_of(v, mesh, mesh.velocity_scale(), AtomOutsideMesh::Grid::Velocity, atom);
}

Point space_point(const CellIndex& cell, const Mesh& mesh) {
  return point_of(cell, mesh.space_scale());
}

Point velocity_point(const CellIndex& cell, const Mesh& mesh) {
  return point_of(cell, mesh.velocity_scale());
}

std::vector<PhaseCell> phase_cells(const VelocityMeasure& v, const Mesh& mesh) {
  if (v.dim() != mesh.dim()) throw DimensionMismatch("velocity measure and mesh differ in dimension");
  std::map<std::pair<CellIndex, CellIndex>, double> cells;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v.atoms()[i];
    auto key = std::make_pair(space_cell(a.location, mesh, i), velocity_cell(a.velocity, mesh, i));
    cells[std::move(key)] += a.weight;
  }
  std::vector<PhaseCell> out;
  out.reserve(cells.size());
  for (auto& [key, mass] : cells)
    if (mass > 0.0) out.push_back({key.first, key.second, mass});
  return out;
}

DiscreteMeasure grid_project_x(const DiscreteMeasure& m, const Mesh& mesh) {
  if (m.dim() != mesh.dim()) throw DimensionMismatch("measure and mesh differ in dimension");
  std::map<CellIndex, double> cells;
  for (std::size_t i = 0; i < m.size(); ++i) cells[space_cell(m[i].location, mesh, i)] += m[i].weight;
  std::vector<Atom> atoms;
  atoms.reserve(cells.size());
  for (const auto& [cell, mass] : cells)
    if (mass > 0.0) atoms.push_back({space_point(cell, mesh), mass});
  return DiscreteMeasure(m.dim(), std::move(atoms));
}

VelocityMeasure grid_project_xv(const VelocityMeasure& v, const Mesh& mesh) {
  std::vector<VelocityAtom> atoms;
  for (const auto& c : phase_cells(v, mesh))
    atoms.push_back({space_point(c.x, mesh), velocity_point(c.v, mesh), c.mass});
  return VelocityMeasure(v.dim(), std::move(atoms));
}

}  // namespace mde
