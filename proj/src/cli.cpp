#include "mde/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mde/config.hpp"
#include "mde/errors.hpp"
#include "mde/io.hpp"
#include "mde/metrics.hpp"
#include "mde/sampling.hpp"
#include "mde/verify.hpp"

namespace mde::cli {

namespace {

using io::format_real;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::vector<int> n_list;
};

/// Pass/fail bookkeeping for one subcommand; prints one line per assertion.
class Verdict {
 public:
  explicit Verdict(std::ostream& out) : out_(out) {}

  bool check(bool ok, const std::string& what) {
    out_ << (ok ? "PASS  " : "FAIL  ") << what << '\n';
    failed_ = failed_ || !ok;
    return ok;
  }
  int exit_code() const { return failed_ ? kAssertionFailed : kPass; }

 private:
  std::ostream& out_;
  bool failed_ = false;
};

RunConfig load(const Overrides& o) {
  RunConfig cfg = load_config(o.config);
  if (o.n) {
    if (*o.n < 1) throw ConfigError("--n must be positive");
    cfg.n = *o.n;
  }
  if (!o.n_list.empty()) {
    if (!std::is_sorted(o.n_list.begin(), o.n_list.end()) ||
        std::adjacent_find(o.n_list.begin(), o.n_list.end()) != o.n_list.end() ||
        o.n_list.front() < 1)
      throw ConfigError("--n-list must be strictly ascending positive integers");
    cfg.n_list = o.n_list;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.out_dir = o.out;
  return cfg;
}

void save_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
  io::write_file_atomic(cfg.out_dir / name, text);
}

/// The resolved config next to the outputs it produced.
void save_provenance(const RunConfig& cfg) {
  std::ostringstream s;
  for (const auto& [k, v] : cfg.raw) s << k << " = " << v << '\n';
  s << "numerics.seed_used = " << cfg.seed << '\n';
  save_text(cfg, "run.cfg", s.str());
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Trajectory traj = solve(cfg.scenario, cfg.n);
  if (cfg.write_trajectory) {
    std::ostringstream s;
    io::write_trajectory_csv(s, traj);
    save_text(cfg, "trajectory.csv", s.str());
  }
  if (cfg.write_diagnostics) {
    std::ostringstream s;
    io::write_diagnostics_csv(s, traj);
    save_text(cfg, "diagnostics.csv", s.str());
  }
  save_provenance(cfg);

  Verdict v(out);
  const double bound = cfg.scenario.support_bound();
  double worst_radius = 0.0;
  double min_weight = 0.0;
  for (const auto& m : traj.states) {
    worst_radius = std::max(worst_radius, support_radius(m));
    for (const auto& a : m.atoms()) min_weight = std::min(min_weight, a.weight);
  }
  const auto& last = traj.diagnostics.back();
  out << "scenario " << cfg.scenario.name << ", N = " << cfg.n << ", " << traj.states.size()
      << " states, final mass " << format_real(last.mass) << ", final atoms " << last.atom_count
      << '\n';
  v.check(min_weight >= 0.0, "all weights nonnegative (min " + format_real(min_weight) + ")");
  v.check(worst_radius <= bound, "support radius " + format_real(worst_radius) +
                                     " <= a priori bound " + format_real(bound));
  return v.exit_code();
}

int cmd_converge(const RunConfig& cfg, std::ostream& out) {
  const auto rows = convergence_study(cfg.scenario, cfg.n_list, cfg.probe_times);
  std::ostringstream s;
  s << "N,N_fine,t,distance,order\n";
  for (const auto& r : rows)
    s << r.n << ',' << r.n_fine << ',' << format_real(r.time) << ',' << format_real(r.distance)
      << ',' << format_real(r.order) << '\n';
  save_text(cfg, "convergence.csv", s.str());
  save_provenance(cfg);

  Verdict v(out);
  for (const auto& r : rows) {
    std::ostringstream what;
    what << "t = " << r.time << ": ||mu^" << r.n << " - mu^" << r.n_fine
         << "|| = " << format_real(r.distance);
    if (std::isnan(r.order)) {
      v.check(r.distance > 0.0, what.str() + " is positive");
      continue;
    }
    what << ", order " << r.order << " in [" << cfg.order_min << ", " << cfg.order_max << "]";
    v.check(r.distance > 0.0 && r.order >= cfg.order_min && r.order <= cfg.order_max, what.str());
  }
  return v.exit_code();
}

int cmd_residual(const RunConfig& cfg, std::ostream& out) {
  const auto f = bump_function(cfg.bump_factor * cfg.scenario.support_bound());
  std::vector<std::future<Trajectory>> pending;
  for (int n : cfg.n_list)
    pending.push_back(
        std::async(std::launch::async, [&cfg, n] { return solve(cfg.scenario, n); }));

  std::vector<std::vector<ResidualReport>> reports;  // [N][probe]
  for (auto& p : pending) {
    const Trajectory traj = p.get();
    std::vector<ResidualReport> per_time;
    for (double t : cfg.probe_times) per_time.push_back(weak_residual(traj, cfg.scenario, f, t));
    reports.push_back(std::move(per_time));
  }

  std::ostringstream s;
  s << "N,t,residual,lhs,rhs_transport,rhs_growth,rhs_source\n";
  for (const auto& per_time : reports)
    for (const auto& r : per_time)
      s << r.n << ',' << format_real(r.time) << ',' << format_real(r.residual) << ','
        << format_real(r.lhs) << ',' << format_real(r.rhs_transport) << ','
        << format_real(r.rhs_growth) << ',' << format_real(r.rhs_source) << '\n';
  save_text(cfg, "residual.csv", s.str());
  save_provenance(cfg);

  Verdict v(out);
  for (std::size_t p = 0; p < cfg.probe_times.size(); ++p) {
    if (reports.size() == 1) {
      const auto& r = reports[0][p];
      const double limit = cfg.residual_constant / r.n;
      v.check(r.residual <= limit, "N = " + std::to_string(r.n) + ", t = " + format_real(r.time) +
                                       ": residual " + format_real(r.residual) + " <= " +
                                       format_real(limit));
      continue;
    }
    for (std::size_t k = 1; k < reports.size(); ++k) {
      const auto& a = reports[k - 1][p];
      const auto& b = reports[k][p];
      const double ratio = b.residual / a.residual;
      std::ostringstream what;
      what << "t = " << b.time << ": residual(" << b.n << ") / residual(" << a.n
           << ") = " << ratio << " in [" << cfg.ratio_min << ", " << cfg.ratio_max << "]";
      v.check(ratio >= cfg.ratio_min && ratio <= cfg.ratio_max, what.str());
    }
  }
  return v.exit_code();
}

std::vector<double> continuity_times(const RunConfig& cfg, int n) {
  if (cfg.raw.count("numerics.probe_times")) return cfg.probe_times;
  const Mesh mesh(n, cfg.scenario.dim(), cfg.scenario.horizon);
  return mesh.time_points();
}

int cmd_continuity(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.perturbed_initial)
    throw ConfigError("continuity needs continuity.perturbed_atoms in the config");
  const auto& mu0 = cfg.scenario.initial;
  const auto& nu0 = *cfg.perturbed_initial;
  const auto fit = continuity_experiment(cfg.scenario, mu0, nu0, cfg.n, continuity_times(cfg, cfg.n));
  const int fine = 2 * cfg.n;
  const auto check = continuity_experiment(cfg.scenario, mu0, nu0, fine, continuity_times(cfg, fine));

  auto table = [](const ContinuityReport& rep, double exponent) {
    std::ostringstream s;
    s << "t,ratio,bound\n";
    for (const auto& r : rep.rows)
      s << format_real(r.time) << ',' << format_real(r.ratio) << ','
        << format_real(std::exp(exponent * r.time)) << '\n';
    return s.str();
  };
  save_text(cfg, "continuity.csv", table(fit, fit.fitted_exponent));
  save_text(cfg, "continuity_check.csv", table(check, fit.fitted_exponent));
  save_provenance(cfg);

  Verdict v(out);
  out << "fitted exponent C_hat = " << format_real(fit.fitted_exponent) << " at N = " << cfg.n
      << " (N = " << fine << " alone gives " << format_real(check.fitted_exponent) << ")\n";
  double worst = 0.0;
  for (const auto& r : check.rows)
    worst = std::max(worst, r.ratio / std::exp(fit.fitted_exponent * r.time) - 1.0);
  v.check(worst <= cfg.envelope_slack,
          "N = " + std::to_string(fine) + " stays under exp(C_hat t): worst excess " +
              format_real(worst) + " <= " + format_real(cfg.envelope_slack));
  if (cfg.ratio_ceiling) {
    double top = 0.0;
    for (const auto* rep : {&fit, &check})
      for (const auto& r : rep->rows) top = std::max(top, r.ratio);
    v.check(top <= *cfg.ratio_ceiling,
            "max ratio " + format_real(top) + " <= " + format_real(*cfg.ratio_ceiling));
  }
  return v.exit_code();
}

struct CertifySample {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  double tau = 0.0;
};

struct CertifyRow {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
  std::string detail;
};

std::vector<CertifyRow> certify_one(const RunConfig& cfg, bool one_d_probability,
                                    const CertifySample& s) {
  const auto& mvf = cfg.scenario.mvf;
  const auto& k = mvf.constants();
  const double tol = cfg.tolerance;
  std::vector<CertifyRow> rows;

  for (const auto* m : {&s.mu, &s.nu}) {
    const auto r = check_marginal(mvf, *m);
    rows.push_back({m == &s.mu ? "marginal_mu" : "marginal_nu", r.output_mass, r.input_mass, r.ok,
                    r.detail});
  }
  const auto v1 = check_v1(mvf, s.mu, k.support_speed);
  rows.push_back({"v1", v1.ratio, k.support_speed, v1.ratio <= k.support_speed + tol, ""});
  const auto v2 = check_v2(mvf, s.mu, s.nu);
  rows.push_back({"v2", v2.lhs, v2.rhs, v2.lhs <= v2.rhs + tol, ""});
  const auto v3 = check_v3(mvf, s.mu, s.nu, s.tau);
  rows.push_back({"v3", v3.lhs, v3.rhs, v3.gap >= -tol, ""});
  if (one_d_probability) {
    const double w1 = wasserstein1_1d(s.mu, s.nu);
    rows.push_back({"v3_w1", v3.lhs, w1, v3.lhs <= w1 + tol, ""});
  }
  return rows;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const bool probability = cfg.mvf_kind == "barycenter" ||
                           (cfg.mvf_kind == "broken_marginal" && cfg.raw.at("mvf.base") == "barycenter");
  MeasureSampler shape;
  shape.dim = cfg.scenario.dim();
  shape.max_atoms = cfg.sample_atoms;
  shape.box = cfg.sample_box;
  shape.probability = probability;

  // Draw every sample up front so the stream does not depend on scheduling.
  CounterRng rng(cfg.seed);
  std::vector<CertifySample> samples;
  for (int k = 0; k < cfg.samples; ++k) {
    CertifySample s{sample_measure(rng, shape), sample_measure(rng, shape), 0.0};
    s.tau = rng.uniform();
    samples.push_back(std::move(s));
  }

  std::vector<std::vector<CertifyRow>> results(samples.size());
  const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  {
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < samples.size(); i += workers)
          results[i] = certify_one(cfg, probability && shape.dim == 1, samples[i]);
      }));
    for (auto& f : pool) f.get();
  }

  std::ostringstream csv;
  csv << "sample,check,lhs,rhs,ok\n";
  nlohmann::json witnesses = nlohmann::json::array();
  std::map<std::string, std::pair<int, int>> tally;  // check -> (passed, total)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (const auto& r : results[i]) {
      csv << i << ',' << r.check << ',' << format_real(r.lhs) << ',' << format_real(r.rhs) << ','
          << (r.ok ? 1 : 0) << '\n';
      auto& t = tally[r.check];
      t.first += r.ok ? 1 : 0;
      ++t.second;
      if (!r.ok)
        witnesses.push_back({{"sample", i},
                             {"check", r.check},
                             {"lhs", r.lhs},
                             {"rhs", r.rhs},
                             {"detail", r.detail},
                             {"tau", samples[i].tau},
                             {"mu", nlohmann::json::parse(io::measure_to_json(samples[i].mu))},
                             {"nu", nlohmann::json::parse(io::measure_to_json(samples[i].nu))}});
    }
  }
  save_text(cfg, "certify.csv", csv.str());
  if (!witnesses.empty()) save_text(cfg, "witnesses.json", witnesses.dump(2) + "\n");
  save_provenance(cfg);

  Verdict v(out);
  for (const auto& [check, t] : tally)
    v.check(t.first == t.second, check + ": " + std::to_string(t.first) + "/" +
                                     std::to_string(t.second) + " samples pass");
  if (!witnesses.empty()) {
    const auto& w = witnesses.front();
    err << "first violation: sample " << w["sample"].get<std::size_t>() << ", check "
        << w["check"].get<std::string>() << ", lhs " << format_real(w["lhs"].get<double>())
        << ", rhs " << format_real(w["rhs"].get<double>());
    if (!w["detail"].get<std::string>().empty()) err << ": " << w["detail"].get<std::string>();
    err << "\n" << witnesses.size() << " witnesses written to "
        << (cfg.out_dir / "witnesses.json").string() << '\n';
  }
  return v.exit_code();
}

int cmd_metrics(const std::string& a_path, const std::string& b_path, const std::string& plan_path,
                std::ostream& out) {
  const auto a = io::load_measure(a_path);
  const auto b = io::load_measure(b_path);
  const auto flat = flat_distance(a, b);
  out << "flat_distance " << format_real(flat.distance) << '\n';
  const double ma = total_mass(a);
  const double mb = total_mass(b);
  if (a.dim() == 1 && ma > 0.0 && std::abs(ma - mb) <= 1e-12 * std::max(ma, mb))
    out << "wasserstein1 " << format_real(wasserstein1_1d(a, b)) << '\n';
  if (!plan_path.empty()) {
    std::ostringstream s;
    write_plan_csv(s, flat.plan, a, b);
    io::write_file_atomic(plan_path, s.str());
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice solver and verification harness for measure differential equations",
               "mdelab"};
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "scenario file")->required();
    sub->add_option("--out", o.out, "output directory (overrides output.dir)");
    sub->add_option("--seed", o.seed, "seed for randomized sweeps");
    sub->add_option("--n", o.n, "resolution N");
    sub->add_option("--n-list", o.n_list, "ascending resolutions, comma separated")
        ->delimiter(',');
  };

  auto* solve_cmd = app.add_subcommand("solve", "one trajectory plus diagnostics");
  auto* converge_cmd = app.add_subcommand("converge", "distance between successive resolutions");
  auto* continuity_cmd = app.add_subcommand("continuity", "growth of the distance between two runs");
  auto* residual_cmd = app.add_subcommand("residual", "weak-form defect against a bump function");
  auto* certify_cmd = app.add_subcommand("certify", "randomized audit of the field's constants");
  for (auto* sub : {solve_cmd, converge_cmd, continuity_cmd, residual_cmd, certify_cmd})
    add_common(sub);

  auto* metrics_cmd = app.add_subcommand("metrics", "distance between two measure files");
  std::string a_path;
  std::string b_path;
  std::string plan_path;
  metrics_cmd->add_option("first", a_path, "measure file (.csv or .json)")->required();
  metrics_cmd->add_option("second", b_path, "measure file (.csv or .json)")->required();
  metrics_cmd->add_option("--plan", plan_path, "write the optimal partial plan as CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageOrConfig;
  }

  try {
    if (metrics_cmd->parsed()) return cmd_metrics(a_path, b_path, plan_path, out);
    const RunConfig cfg = load(o);
    if (solve_cmd->parsed()) return cmd_solve(cfg, out);
    if (converge_cmd->parsed()) return cmd_converge(cfg, out);
    if (continuity_cmd->parsed()) return cmd_continuity(cfg, out);
    if (residual_cmd->parsed()) return cmd_residual(cfg, out);
    return cmd_certify(cfg, out, err);
  } catch (const AtomOutsideMesh& e) {
    err << "error: " << e.what() << '\n';
    return kOutsideMesh;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrConfig;
  }
}

}  // namespace mde::cli
