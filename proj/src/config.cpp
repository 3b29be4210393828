#include "mde/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mde/errors.hpp"

namespace mde {

namespace {

const std::set<std::string> kKnownKeys = {
    "scenario.name",        "scenario.dim",          "scenario.horizon",
    "initial.atoms",        "mvf.kind",              "mvf.base",
    "mvf.offset",           "mvf.slope",             "mvf.C_S",
    "growth.kind",          "growth.rate",           "growth.offset",
    "growth.gradient",      "growth.kappa",          "growth.C_b",
    "source.kind",          "source.atoms",          "source.alpha",
    "numerics.n",           "numerics.n_list",       "numerics.probe_times",
    "numerics.seed",        "certify.samples",       "certify.tolerance",
    "certify.box",          "certify.atoms",         "residual.bump_factor",
    "residual.constant",    "residual.ratio_min",    "residual.ratio_max",
    "converge.order_min",   "converge.order_max",    "continuity.perturbed_atoms",
    "continuity.slack",     "continuity.ratio_ceiling", "output.dir",
    "output.trajectory",    "output.diagnostics",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_real(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
  return v;
}

class Entries {
 public:
  Entries(std::string origin) : origin_(std::move(origin)) {}

  void add(const std::string& key, const std::string& value, int line) {
    if (!kKnownKeys.count(key)) fail(line, "unknown key '" + key + "'");
    if (values_.count(key))
      fail(line, "duplicate key '" + key + "' (first set on line " +
                     std::to_string(values_[key].second) + ")");
    values_[key] = {value, line};
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::string& text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing key '" + key + "'");
    return it->second.first;
  }

  std::string text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  double real(const std::string& key) const {
    return convert(key, [](const std::string& t) { return to_real(t); });
  }
  double real_or(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }

  long long integer(const std::string& key) const {
    return convert(key, [](const std::string& t) {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    });
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    return convert(key, [](const std::string& t) {
      std::size_t used = 0;
      if (!t.empty() && t[0] == '-') throw std::invalid_argument(t);
      const unsigned long long v = std::stoull(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return static_cast<std::uint64_t>(v);
    });
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& t = text(key);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    fail(line(key), "'" + key + "' must be true or false, got '" + t + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    return convert(key, [](const std::string& t) {
      std::vector<double> out;
      for (const auto& item : split(t, ',')) out.push_back(to_real(item));
      return out;
    });
  }

  DiscreteMeasure atoms(const std::string& key, int dim) const {
    const auto& t = text(key);
    try {
      return parse_atom_list(t, dim);
    } catch (const std::exception& e) {
      fail(line(key), "'" + key + "': " + e.what());
    }
  }

  int line(const std::string& key) const { return values_.at(key).second; }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + what);
  }

  std::map<std::string, std::string> raw() const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : values_) out[k] = v.first;
    return out;
  }

 private:
  template <class F>
  auto convert(const std::string& key, F f) const -> decltype(f(std::string())) {
    const auto& t = text(key);
    try {
      return f(t);
    } catch (const std::exception&) {
      fail(line(key), "cannot parse value '" + t + "' of '" + key + "'");
    }
  }

  std::string origin_;
  std::map<std::string, std::pair<std::string, int>> values_;
};

MeasureVectorField build_field(const Entries& e, const std::string& kind, int dim) {
  if (kind == "barycenter") {
    if (dim != 1) e.fail(e.line("mvf.kind"), "barycenter field is one-dimensional");
    return barycenter_mvf();
  }
  if (kind == "affine_field") {
    Point offset(dim, 0.0);
    if (e.has("mvf.offset")) {
      offset = e.reals("mvf.offset");
      if (static_cast<int>(offset.size()) != dim)
        e.fail(e.line("mvf.offset"), "mvf.offset needs " + std::to_string(dim) + " components");
    }
    return affine_field_mvf(offset, e.real_or("mvf.slope", 0.0), e.real("mvf.C_S"));
  }
  const int at = e.has("mvf.kind") ? e.line("mvf.kind") : 0;
  e.fail(at, "unknown field kind '" + kind + "'");
}

GrowthFunction build_growth(const Entries& e, int dim) {
  const auto kind = e.text_or("growth.kind", "none");
  if (kind == "none") return zero_growth();
  if (kind == "constant") return constant_growth(e.real("growth.rate"));
  if (kind == "affine") {
    Point gradient(dim, 0.0);
    if (e.has("growth.gradient")) {
      gradient = e.reals("growth.gradient");
      if (static_cast<int>(gradient.size()) != dim)
        e.fail(e.line("growth.gradient"),
               "growth.gradient needs " + std::to_string(dim) + " components");
    }
    return affine_growth(e.real_or("growth.offset", 0.0), gradient, e.real("growth.C_b"));
  }
  if (kind == "mass_coupled") return mass_coupled_growth(e.real("growth.kappa"), e.real("growth.C_b"));
  e.fail(e.line("growth.kind"), "unknown growth kind '" + kind + "'");
}

SourceOperator build_source(const Entries& e, int dim) {
  const auto kind = e.text_or("source.kind", "none");
  if (kind == "none") return no_source(dim);
  if (kind == "fixed") return fixed_source(e.atoms("source.atoms", dim));
  if (kind == "scaled") return scaled_source(e.atoms("source.atoms", dim), e.real("source.alpha"));
  e.fail(e.line("source.kind"), "unknown source kind '" + kind + "'");
}

}  // namespace

DiscreteMeasure parse_atom_list(const std::string& text, int dim) {
  std::vector<Atom> atoms;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("atom '" + item + "' is not of the form x:w");
    Atom a;
    for (const auto& c : split(item.substr(0, colon), ',')) a.location.push_back(to_real(c));
    a.weight = to_real(trim(item.substr(colon + 1)));
    if (static_cast<int>(a.location.size()) != dim)
      throw ConfigError("atom '" + item + "' needs " + std::to_string(dim) + " coordinates");
    atoms.push_back(std::move(a));
  }
  return DiscreteMeasure(dim, std::move(atoms));
}

RunConfig parse_config(std::istream& in, const std::string& origin) {
  Entries e(origin);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) e.fail(lineno, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) e.fail(lineno, "expected 'key = value'");
    e.add(key, value, lineno);
  }

  const auto dim = static_cast<int>(e.has("scenario.dim") ? e.integer("scenario.dim") : 1);
  if (dim < 1) e.fail(e.line("scenario.dim"), "scenario.dim must be positive");

  auto kind = e.text("mvf.kind");
  auto field = [&] {
    if (kind != "broken_marginal") return build_field(e, kind, dim);
    return broken_marginal_mvf(build_field(e, e.text("mvf.base"), dim));
  }();

  Scenario scenario{e.text_or("scenario.name", "scenario"),
                    std::move(field),
                    build_growth(e, dim),
                    build_source(e, dim),
                    e.atoms("initial.atoms", dim),
                    e.real_or("scenario.horizon", 1.0)};
  try {
    scenario.validate();
  } catch (const Error& err) {
    throw ConfigError(origin + ": " + err.what());
  }

  RunConfig cfg(std::move(scenario));
  cfg.mvf_kind = kind;

  if (e.has("numerics.n")) {
    cfg.n = static_cast<int>(e.integer("numerics.n"));
    if (cfg.n < 1) e.fail(e.line("numerics.n"), "numerics.n must be positive");
  }
  if (e.has("numerics.n_list")) {
    cfg.n_list.clear();
    for (double v : e.reals("numerics.n_list")) {
      if (v < 1 || v != std::floor(v))
        e.fail(e.line("numerics.n_list"), "numerics.n_list must hold positive integers");
      cfg.n_list.push_back(static_cast<int>(v));
    }
    if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
        std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end())
      e.fail(e.line("numerics.n_list"), "numerics.n_list must be strictly ascending");
  }
  cfg.probe_times = e.has("numerics.probe_times") ? e.reals("numerics.probe_times")
                                                  : std::vector<double>{cfg.scenario.horizon};
  for (double t : cfg.probe_times)
    if (t < 0.0 || t > cfg.scenario.horizon + 1e-12)
      e.fail(e.line("numerics.probe_times"), "probe times must lie in [0, T]");
  if (e.has("numerics.seed")) cfg.seed = e.unsigned_integer("numerics.seed");

  if (e.has("certify.samples")) cfg.samples = static_cast<int>(e.integer("certify.samples"));
  cfg.tolerance = e.real_or("certify.tolerance", cfg.tolerance);
  cfg.sample_box = e.real_or("certify.box", cfg.sample_box);
  if (e.has("certify.atoms")) cfg.sample_atoms = static_cast<int>(e.integer("certify.atoms"));
  if (cfg.samples < 1 || cfg.sample_atoms < 1 || !(cfg.sample_box > 0.0))
    e.fail(e.line(e.has("certify.samples") ? "certify.samples" : "certify.atoms"),
           "certify settings must be positive");

  cfg.bump_factor = e.real_or("residual.bump_factor", cfg.bump_factor);
  cfg.residual_constant = e.real_or("residual.constant", cfg.residual_constant);
  cfg.ratio_min = e.real_or("residual.ratio_min", cfg.ratio_min);
  cfg.ratio_max = e.real_or("residual.ratio_max", cfg.ratio_max);
  cfg.order_min = e.real_or("converge.order_min", cfg.order_min);
  cfg.order_max = e.real_or("converge.order_max", cfg.order_max);

  if (e.has("continuity.perturbed_atoms"))
    cfg.perturbed_initial = e.atoms("continuity.perturbed_atoms", dim);
  cfg.envelope_slack = e.real_or("continuity.slack", cfg.envelope_slack);
  if (e.has("continuity.ratio_ceiling")) cfg.ratio_ceiling = e.real("continuity.ratio_ceiling");

  cfg.out_dir = e.text_or("output.dir", cfg.out_dir.string());
  cfg.write_trajectory = e.boolean("output.trajectory", true);
  cfg.write_diagnostics = e.boolean("output.diagnostics", true);
  cfg.raw = e.raw();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, path.string());
}

}  // namespace mde
