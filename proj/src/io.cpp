#include "mde/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mde/errors.hpp"

namespace mde::io {

std::string format_real(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& m) {
  out << "atom_index";
  for (int k = 0; k < m.dim(); ++k) out << ",x" << k;
  out << ",weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << i;
    for (double c : m[i].location) out << ',' << format_real(c);
    out << ',' << format_real(m[i].weight) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_real(const std::string& text, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidMeasure("line " + std::to_string(line) + ": cannot parse number '" + text + "'");
  }
}

}  // namespace

DiscreteMeasure read_measure_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidMeasure("measure CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header.front() != "atom_index" || header.back() != "weight")
    throw InvalidMeasure("measure CSV header must be atom_index,x0,...,weight");
  const int dim = static_cast<int>(header.size()) - 2;
  for (int k = 0; k < dim; ++k)
    if (header[k + 1] != "x" + std::to_string(k))
      throw InvalidMeasure("measure CSV header column " + std::to_string(k + 1) + " must be x" +
                           std::to_string(k));

  std::vector<Atom> atoms;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != dim + 2)
      throw InvalidMeasure("line " + std::to_string(lineno) + ": expected " +
                           std::to_string(dim + 2) + " fields");
    Atom a;
    a.location.resize(dim);
    for (int k = 0; k < dim; ++k) a.location[k] = parse_real(fields[k + 1], lineno);
    a.weight = parse_real(fields.back(), lineno);
    atoms.push_back(std::move(a));
  }
  return DiscreteMeasure(dim, std::move(atoms));
}

std::string measure_to_json(const DiscreteMeasure& m) {
  nlohmann::json j;
  j["dim"] = m.dim();
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : m.atoms()) j["atoms"].push_back({{"x", a.location}, {"w", a.weight}});
  return j.dump();
}

DiscreteMeasure measure_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int dim = j.at("dim").get<int>();
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back({a.at("x").get<std::vector<double>>(), a.at("w").get<double>()});
    return DiscreteMeasure(dim, std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidMeasure(std::string("malformed measure JSON: ") + e.what());
  }
}

DiscreteMeasure load_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  if (path.extension() == ".json") {
    std::stringstream buf;
    buf << in.rdbuf();
    return measure_from_json(buf.str());
  }
  return read_measure_csv(in);
}

void save_measure(const std::filesystem::path& path, const DiscreteMeasure& m) {
  if (path.extension() == ".json") {
    write_file_atomic(path, measure_to_json(m) + "\n");
    return;
  }
  std::ostringstream out;
  write_measure_csv(out, m);
  write_file_atomic(path, out.str());
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const int dim = traj.mesh.dim();
  out << "t,atom_index";
  for (int k = 0; k < dim; ++k) out << ",x" << k;
  out << ",weight\n";
  for (std::size_t l = 0; l < traj.states.size(); ++l) {
    const auto& m = traj.states[l];
    for (std::size_t i = 0; i < m.size(); ++i) {
      out << format_real(traj.times()[l]) << ',' << i;
      for (double c : m[i].location) out << ',' << format_real(c);
      out << ',' << format_real(m[i].weight) << '\n';
    }
  }
}

void write_diagnostics_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,mass,support_radius,atom_count\n";
  for (const auto& d : traj.diagnostics)
    out << format_real(d.time) << ',' << format_real(d.mass) << ','
        << format_real(d.support_radius) << ',' << d.atom_count << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mde::io
