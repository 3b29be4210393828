#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mde/scheme.hpp"

namespace mde {

/// A parsed scenario file plus the numerics and output settings of a run.
///
/// The file format is one `section.key = value` assignment per line; `#`
/// starts a comment. Atom lists are written `x:w; x:w` with comma-separated
/// coordinates in more than one dimension, e.g. `0.5,-1:0.25; 0,0:0.75`.
/// Every key is listed in README.md.
struct RunConfig {
  explicit RunConfig(Scenario s) : scenario(std::move(s)) {}

  Scenario scenario;
  std::string mvf_kind;  // affine_field | barycenter | broken_marginal

  int n = 8;
  std::vector<int> n_list{4, 8, 16, 32};
  std::vector<double> probe_times;  // defaults to {T}
  std::uint64_t seed = 1;

  // certify
  int samples = 100;
  double tolerance = 1e-9;
  double sample_box = 1.0;
  int sample_atoms = 8;

  // residual
  double bump_factor = 1.1;        // bump radius / support bound
  double residual_constant = 1.0;  // single-N check: residual <= constant / N
  double ratio_min = 0.3;
  double ratio_max = 0.8;

  // converge
  double order_min = 0.3;
  double order_max = 1.7;

  // continuity
  std::optional<DiscreteMeasure> perturbed_initial;
  double envelope_slack = 0.05;        // allowed violation of exp(C_hat t) at 2N
  std::optional<double> ratio_ceiling;  // optional absolute cap on r(t)

  std::filesystem::path out_dir = "out";
  bool write_trajectory = true;
  bool write_diagnostics = true;

  /// Verbatim key/value pairs as read.
  std::map<std::string, std::string> raw;
};

/// Throws ConfigError whose message starts with `origin:line:` for syntax
/// errors, unknown keys and bad values, and with `origin:` for missing keys.
RunConfig parse_config(std::istream& in, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// `x:w; x:w` atom list in dimension `dim`.
DiscreteMeasure parse_atom_list(const std::string& text, int dim);

}  // namespace mde
