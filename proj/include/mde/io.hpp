#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mde/measures.hpp"
#include "mde/scheme.hpp"

namespace mde::io {

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_real(double x);

/// Header `atom_index,x0,...,x{d-1},weight`, one row per atom.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& m);
DiscreteMeasure read_measure_csv(std::istream& in);

/// `{"dim": d, "atoms": [{"x": [...], "w": w}, ...]}`
std::string measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const std::string& text);

/// Dispatches on extension: `.json` is JSON, anything else CSV.
DiscreteMeasure load_measure(const std::filesystem::path& path);
void save_measure(const std::filesystem::path& path, const DiscreteMeasure& m);

/// Rows `t,atom_index,x0..x{d-1},weight` for every state of the run.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Rows `t,mass,support_radius,atom_count`.
void write_diagnostics_csv(std::ostream& out, const Trajectory& traj);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mde::io
