#include "spectropt/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectropt/gamma.hpp"
#include "spectropt/io.hpp"
#include "spectropt/optimize.hpp"
#include "spectropt/shapes.hpp"
#include "spectropt/spectrum.hpp"
#include "spectropt/torsion.hpp"
#include "spectropt/verify.hpp"

namespace spectropt::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int log_level() {
  const char* env = std::getenv("SPECTROPT_LOG");
  if (!env) return 1;
  const std::string v(env);
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

std::mutex g_log_mutex;

void log_line(int level, const std::string& msg) {
  if (log_level() < level) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << msg << '\n';
}

void error_record(int code, const std::string& reason) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "spectropt-error code=" << code << " reason=\"" << reason
            << "\"\n";
}

// ------------------------------------------------------- config validation

void require_object(const json& j, const std::string& where) {
  if (!j.is_object())
    throw std::invalid_argument(where + ": expected a JSON object");
}

void reject_unknown(const json& j, const std::vector<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

double num_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw std::invalid_argument("config: '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int int_or(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw std::invalid_argument("config: '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

GridSpec grid_from_config(const json& cfg) {
  if (!cfg.contains("grid"))
    throw std::invalid_argument("config: missing 'grid'");
  const json& g = cfg.at("grid");
  require_object(g, "grid");
  reject_unknown(g, {"d", "L", "n"}, "grid");
  return build_grid(int_or(g, "d", 1), num_or(g, "L", 1.0), int_or(g, "n", 63));
}

GeneralizedPotential potential_from_config(const json& spec_json,
                                           const GridSpec& g) {
  require_object(spec_json, "potential");
  if (!spec_json.contains("shape"))
    throw std::invalid_argument("potential: missing 'shape'");
  const std::string shape = spec_json.at("shape").get<std::string>();
  GeneralizedPotential pot;

  auto need_d = [&](int d) {
    if (g.d != d)
      throw std::invalid_argument("potential: shape '" + shape +
                                  "' requires d=" + std::to_string(d));
  };
  if (shape == "interval") {
    reject_unknown(spec_json, {"shape", "R", "plus_constant"}, "potential");
    need_d(1);
    pot = shapes::domain_potential(
        g, shapes::mask_interval(g, num_or(spec_json, "R", 1.0)));
  } else if (shape == "disk") {
    reject_unknown(spec_json, {"shape", "R", "cx", "cy", "plus_constant"},
                   "potential");
    need_d(2);
    pot = shapes::domain_potential(
        g, shapes::mask_disk(g, num_or(spec_json, "R", 1.0),
                             num_or(spec_json, "cx", 0.0),
                             num_or(spec_json, "cy", 0.0)));
  } else if (shape == "square") {
    reject_unknown(spec_json, {"shape", "half_side", "plus_constant"},
                   "potential");
    need_d(2);
    pot = shapes::domain_potential(
        g, shapes::mask_square(g, num_or(spec_json, "half_side", 1.0)));
  } else if (shape == "rectangle") {
    reject_unknown(spec_json, {"shape", "ax", "ay", "plus_constant"},
                   "potential");
    need_d(2);
    pot = shapes::domain_potential(
        g, shapes::mask_rectangle(g, num_or(spec_json, "ax", 1.0),
                                  num_or(spec_json, "ay", 0.5)));
  } else if (shape == "ellipse") {
    reject_unknown(spec_json, {"shape", "a", "b", "plus_constant"},
                   "potential");
    need_d(2);
    pot = shapes::domain_potential(
        g, shapes::mask_ellipse(g, num_or(spec_json, "a", 1.0),
                                num_or(spec_json, "b", 0.5)));
  } else if (shape == "annulus") {
    reject_unknown(spec_json, {"shape", "r_in", "r_out", "plus_constant"},
                   "potential");
    need_d(2);
    pot = shapes::domain_potential(
        g, shapes::mask_annulus(g, num_or(spec_json, "r_in", 0.4),
                                num_or(spec_json, "r_out", 1.0)));
  } else if (shape == "constant") {
    reject_unknown(spec_json, {"shape", "value", "plus_constant"}, "potential");
    const double c = num_or(spec_json, "value", 0.0);
    if (c < 0.0) throw std::invalid_argument("potential: value must be >= 0");
    pot = shapes::constant_potential(g, c);
  } else if (shape == "oscillator") {
    reject_unknown(spec_json, {"shape", "plus_constant"}, "potential");
    pot = shapes::oscillator_potential(g);
  } else if (shape == "file") {
    reject_unknown(spec_json, {"shape", "path", "plus_constant"}, "potential");
    if (!spec_json.contains("path"))
      throw std::invalid_argument("potential: file shape needs 'path'");
    pot = io::potential_from_json(
        io::read_text_file(spec_json.at("path").get<std::string>()));
    if (!same_grid(pot.grid, g))
      throw std::invalid_argument("potential: file grid mismatch");
  } else {
    throw std::invalid_argument("potential: unknown shape '" + shape + "'");
  }

  const double plus = num_or(spec_json, "plus_constant", 0.0);
  if (plus < 0.0)
    throw std::invalid_argument("potential: plus_constant must be >= 0");
  if (plus > 0.0)
    for (std::size_t i = 0; i < pot.vfin.size(); ++i)
      if (!pot.inf_mask[i]) pot.vfin[i] += plus;
  return pot;
}

std::vector<std::string> formats_from_config(const json& cfg) {
  std::vector<std::string> formats{"json", "csv"};
  if (!cfg.contains("output")) return formats;
  const json& o = cfg.at("output");
  require_object(o, "output");
  reject_unknown(o, {"formats"}, "output");
  if (o.contains("formats")) {
    formats.clear();
    for (const json& f : o.at("formats")) {
      const std::string s = f.get<std::string>();
      if (s != "json" && s != "csv" && s != "svg")
        throw std::invalid_argument("output: unknown format '" + s + "'");
      formats.push_back(s);
    }
  }
  return formats;
}

bool wants(const std::vector<std::string>& formats, const char* f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

double solver_tol(const json& cfg, double fallback) {
  if (!cfg.contains("solver")) return fallback;
  const json& s = cfg.at("solver");
  require_object(s, "solver");
  reject_unknown(s, {"tol"}, "solver");
  return num_or(s, "tol", fallback);
}

// ------------------------------------------------------------ file output

struct Emission {
  std::string name;
  std::string content;
};

void emit_all(const std::string& out_dir, const std::string& command,
              const json& resolved, const std::vector<Emission>& files) {
  fs::create_directories(out_dir);
  io::write_text_file(out_dir + "/resolved_config.json", resolved.dump(2) + "\n");
  {
    json meta;
    meta["command"] = command;
    meta["library_version"] = io::library_version();
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["timestamp_utc"] = buf;
    io::write_text_file(out_dir + "/metadata.json", meta.dump(2) + "\n");
  }
  for (const Emission& e : files)
    io::write_text_file(out_dir + "/" + e.name, e.content);
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json j;
  try {
    j = json::parse(io::read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
  require_object(j, "config");
  return j;
}

// ----------------------------------------------------------- the commands

json run_torsion(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"grid", "potential", "solver", "output"}, "config");
  const GridSpec g = grid_from_config(cfg);
  if (!cfg.contains("potential"))
    throw std::invalid_argument("config: missing 'potential'");
  const GeneralizedPotential pot = potential_from_config(cfg.at("potential"), g);
  const double tol = solver_tol(cfg, 1e-10);
  const auto formats = formats_from_config(cfg);

  const TorsionReport tr = torsion_function(pot, tol);
  json report;
  report["P"] = tr.P;
  report["E"] = tr.E;
  report["boundary_shell_mass"] = tr.boundary_shell_mass;
  report["sup_w"] = linf_norm(tr.w);
  report["support_radius"] = support_radius(tr.w);

  std::vector<Emission> files;
  files.push_back({"report.json", report.dump(2) + "\n"});
  if (wants(formats, "csv")) files.push_back({"w.csv", io::field_to_csv(tr.w)});
  if (wants(formats, "svg"))
    files.push_back({"w.svg", io::field_to_svg(tr.w, &pot.inf_mask)});
  emit_all(out_dir, "torsion", cfg, files);
  return report;
}

json run_eigs(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg, {"grid", "potential", "solver", "output", "k"}, "config");
  const GridSpec g = grid_from_config(cfg);
  if (!cfg.contains("potential"))
    throw std::invalid_argument("config: missing 'potential'");
  const GeneralizedPotential pot = potential_from_config(cfg.at("potential"), g);
  const int k = int_or(cfg, "k", 1);
  if (k < 1 || k > 64) throw std::invalid_argument("config: k in [1,64]");
  const double tol = solver_tol(cfg, 1e-8);
  const auto formats = formats_from_config(cfg);

  const Spectrum spec = eigs(pot, k, tol);
  const double P = torsion_function(pot).P;
  json report;
  report["eigenvalues"] = spec.eigenvalues;
  report["residuals"] = spec.residuals;
  report["P"] = P;
  report["kj_merit"] =
      spec.lambda(1) * std::pow(P, 2.0 / (g.d + 2.0));

  std::vector<Emission> files;
  files.push_back({"report.json", report.dump(2) + "\n"});
  if (wants(formats, "csv")) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "j,lambda,residual\n";
    for (int j = 1; j <= k; ++j)
      csv << j << ',' << spec.lambda(j) << ',' << spec.residuals[j - 1] << '\n';
    files.push_back({"eigenvalues.csv", csv.str()});
  }
  if (wants(formats, "svg"))
    files.push_back(
        {"u1.svg", io::field_to_svg(spec.eigenfunctions[0], &pot.inf_mask)});
  emit_all(out_dir, "eigs", cfg, files);
  return report;
}

json run_gamma(const json& cfg, const std::string& out_dir) {
  reject_unknown(cfg,
                 {"grid", "potential_a", "potential_b", "solver", "output",
                  "resolvent"},
                 "config");
  const GridSpec g = grid_from_config(cfg);
  if (!cfg.contains("potential_a") || !cfg.contains("potential_b"))
    throw std::invalid_argument("config: need 'potential_a' and 'potential_b'");
  const GeneralizedPotential a = potential_from_config(cfg.at("potential_a"), g);
  const GeneralizedPotential b = potential_from_config(cfg.at("potential_b"), g);
  const double tol = solver_tol(cfg, 1e-10);

  json report;
  report["d_gamma"] = gamma_distance(a, b, tol);
  bool want_resolvent = false;
  if (cfg.contains("resolvent")) {
    if (!cfg.at("resolvent").is_boolean())
      throw std::invalid_argument("config: 'resolvent' must be a boolean");
    want_resolvent = cfg.at("resolvent").get<bool>();
  }
  if (want_resolvent) {
    if (!potential_leq(a, b))
      throw std::invalid_argument(
          "config: resolvent distance needs potential_a <= potential_b");
    report["resolvent_distance"] = resolvent_distance(a, b);
  }
  emit_all(out_dir, "gamma", cfg, {{"report.json", report.dump(2) + "\n"}});
  return report;
}

json audit_to_json(const SubsolutionAudit& audit) {
  json a;
  a["base_objective"] = audit.base_objective;
  a["worst_violation"] = audit.worst_violation;
  a["tol"] = audit.tol;
  a["passes"] = audit.passes();
  json trials = json::array();
  for (const AuditTrial& t : audit.trials)
    trials.push_back({{"description", t.description}, {"delta", t.delta}});
  a["trials"] = trials;
  return a;
}

json run_optimize(const json& cfg, const std::string& out_dir,
                  std::uint64_t seed) {
  reject_unknown(cfg, {"grid", "problem", "optimizer", "output"}, "config");
  const GridSpec g = grid_from_config(cfg);
  if (!cfg.contains("problem"))
    throw std::invalid_argument("config: missing 'problem'");
  const json& prob = cfg.at("problem");
  require_object(prob, "problem");
  reject_unknown(prob, {"kind", "k", "p", "m"}, "problem");
  if (!prob.contains("kind"))
    throw std::invalid_argument("problem: missing 'kind'");
  const std::string kind = prob.at("kind").get<std::string>();

  PenaltyConfig pc;
  pc.k = int_or(prob, "k", 1);
  pc.p = num_or(prob, "p", 0.5);
  pc.m = num_or(prob, "m", 1.0);
  pc.seed = seed;
  if (cfg.contains("optimizer")) {
    const json& o = cfg.at("optimizer");
    require_object(o, "optimizer");
    reject_unknown(o, {"damping", "max_iters", "tol_obj", "v_cap"}, "optimizer");
    pc.damping = num_or(o, "damping", pc.damping);
    pc.max_iters = int_or(o, "max_iters", pc.max_iters);
    pc.tol_obj = num_or(o, "tol_obj", pc.tol_obj);
    pc.v_cap = num_or(o, "v_cap", pc.v_cap);
  }
  pc.validate();
  const auto formats = formats_from_config(cfg);

  OptReport rep;
  const GeneralizedPotential init = default_init(g, pc.seed);
  if (kind == "potential-mass") {
    rep = pc.k == 1 ? optimize_lambda1_potential(pc, init, g)
                    : optimize_lambdak_potential(pc, init, g);
  } else if (kind == "spectral-torsion") {
    rep = optimize_spectral_torsion(pc, init, g);
  } else {
    throw std::invalid_argument("problem: unknown kind '" + kind + "'");
  }

  json report;
  report["objective_trace"] = rep.objective_trace;
  report["lambda_trace"] = rep.lambda_trace;
  report["mass_or_torsion_trace"] = rep.mass_or_torsion_trace;
  report["support_radius"] = rep.support_radius;
  report["kkt_residual"] = rep.kkt_residual;
  report["converged"] = rep.converged;
  report["box_limited"] = rep.box_limited;
  report["iters"] = rep.iters;
  report["audit"] = audit_to_json(rep.audit);
  if (kind == "spectral-torsion" && g.d == 2) {
    const ScalarField w = torsion_function(rep.final).w;
    const LevelSetGeometry geo = levelset_geometry(w, 0.5 * linf_norm(w));
    report["iso_ratio"] = geo.isoperimetric_ratio();
  }

  std::vector<Emission> files;
  files.push_back({"report.json", report.dump(2) + "\n"});
  files.push_back({"potential.json", io::potential_to_json(rep.final) + "\n"});
  if (wants(formats, "csv")) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "iter,objective,lambda,mass_or_torsion\n";
    for (std::size_t i = 0; i < rep.objective_trace.size(); ++i)
      csv << i << ',' << rep.objective_trace[i] << ',' << rep.lambda_trace[i]
          << ',' << rep.mass_or_torsion_trace[i] << '\n';
    files.push_back({"trace.csv", csv.str()});
  }
  if (wants(formats, "svg")) {
    ScalarField v(g);
    v.values = rep.final.vfin;
    files.push_back(
        {"final_vfin.svg", io::field_to_svg(v, &rep.final.inf_mask)});
  }
  emit_all(out_dir, "optimize", cfg, files);
  return report;
}

json run_verify(const json& cfg, const std::string& out_dir,
                std::uint64_t seed, const std::vector<std::string>& cli_filters,
                int* exit_code) {
  reject_unknown(cfg, {"filters", "oracle_bias"}, "config");
  std::vector<std::string> filters = cli_filters;
  if (cfg.contains("filters"))
    for (const json& f : cfg.at("filters"))
      filters.push_back(f.get<std::string>());
  const double bias = num_or(cfg, "oracle_bias", 0.0);

  const auto results = verify::run_suite(filters, seed, bias);
  json summary;
  summary["seed"] = seed;
  json names = json::array(), fails = json::array();
  bool all_pass = true;
  std::vector<Emission> files;
  for (const verify::CheckResult& r : results) {
    names.push_back(r.name);
    if (!r.pass) {
      fails.push_back(r.name);
      all_pass = false;
    }
    files.push_back({"check-" + r.name + ".json", verify::result_to_json(r) + "\n"});
  }
  summary["checks"] = names;
  summary["failures"] = fails;
  summary["all_pass"] = all_pass;
  files.insert(files.begin(), {"summary.json", summary.dump(2) + "\n"});
  emit_all(out_dir, "verify", cfg, files);

  if (!all_pass) {
    std::string failing;
    for (const json& f : fails) failing += f.get<std::string>() + " ";
    error_record(kExitVerifyFail, "failed checks: " + failing);
    *exit_code = kExitVerifyFail;
  } else {
    *exit_code = kExitOk;
  }
  return summary;
}

// -------------------------------------------------------------- the sweep

void set_by_path(json& root, const std::string& path, const json& value) {
  json* cur = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw std::invalid_argument("sweep: empty axis key");
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

std::vector<std::string> metric_keys(const std::string& command) {
  if (command == "torsion") return {"P", "E", "sup_w"};
  if (command == "eigs") return {"eigenvalues", "P", "kj_merit"};
  if (command == "gamma") return {"d_gamma"};
  if (command == "optimize")
    return {"objective_trace", "support_radius", "kkt_residual"};
  if (command == "verify") return {"all_pass"};
  return {};
}

std::string metric_value(const json& report, const std::string& key) {
  if (!report.contains(key)) return "";
  const json& v = report.at(key);
  std::ostringstream out;
  out.precision(17);
  if (v.is_array()) {
    if (v.empty()) return "";
    const json& last = key == "eigenvalues" ? v.front() : v.back();
    out << last.get<double>();
  } else if (v.is_boolean()) {
    out << (v.get<bool>() ? 1 : 0);
  } else if (v.is_number()) {
    out << v.get<double>();
  }
  return out.str();
}

int dispatch(const std::string& command, const json& cfg,
             const std::string& out_dir, const Options& opt, json* report);

json run_sweep(const json& cfg, const std::string& out_dir, const Options& opt,
               int* exit_code) {
  reject_unknown(cfg, {"command", "base", "axes"}, "config");
  if (!cfg.contains("command") || !cfg.contains("base") || !cfg.contains("axes"))
    throw std::invalid_argument("sweep: need 'command', 'base', 'axes'");
  const std::string command = cfg.at("command").get<std::string>();
  if (command == "sweep")
    throw std::invalid_argument("sweep: nested sweeps are not supported");
  const json& axes = cfg.at("axes");
  if (!axes.is_array() || axes.empty() || axes.size() > 2)
    throw std::invalid_argument("sweep: 'axes' must hold 1 or 2 axes");
  for (const json& ax : axes) {
    require_object(ax, "axis");
    reject_unknown(ax, {"key", "values"}, "axis");
    if (!ax.contains("key") || !ax.contains("values") ||
        !ax.at("values").is_array() || ax.at("values").empty())
      throw std::invalid_argument("sweep: each axis needs key + values");
  }

  // Cartesian point list.
  struct Point {
    json cfg;
    std::vector<std::pair<std::string, json>> coords;
  };
  std::vector<Point> points;
  const json& ax0 = axes.at(0);
  for (const json& v0 : ax0.at("values")) {
    json c = cfg.at("base");
    set_by_path(c, ax0.at("key").get<std::string>(), v0);
    if (axes.size() == 1) {
      points.push_back({c, {{ax0.at("key").get<std::string>(), v0}}});
    } else {
      const json& ax1 = axes.at(1);
      for (const json& v1 : ax1.at("values")) {
        json c2 = c;
        set_by_path(c2, ax1.at("key").get<std::string>(), v1);
        points.push_back({c2,
                          {{ax0.at("key").get<std::string>(), v0},
                           {ax1.at("key").get<std::string>(), v1}}});
      }
    }
  }

  struct Outcome {
    int code = kExitOk;
    json report;
  };
  std::vector<Outcome> outcomes(points.size());
  std::atomic<std::size_t> next{0};
  const int jobs = std::max(1, opt.jobs);
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      char tag[16];
      std::snprintf(tag, sizeof tag, "point_%03zu", i);
      const std::string dir = out_dir + "/" + tag;
      try {
        outcomes[i].code =
            dispatch(command, points[i].cfg, dir, opt, &outcomes[i].report);
      } catch (const std::invalid_argument& e) {
        outcomes[i].code = kExitConfig;
        error_record(kExitConfig, std::string(tag) + ": " + e.what());
      } catch (const SolverError& e) {
        outcomes[i].code = kExitSolver;
        error_record(kExitSolver, std::string(tag) + ": " + e.what());
      } catch (const std::exception& e) {
        outcomes[i].code = kExitSolver;
        error_record(kExitSolver, std::string(tag) + ": " + e.what());
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  const auto metrics = metric_keys(command);
  std::ostringstream csv;
  csv << "point";
  for (const json& ax : axes) csv << ',' << ax.at("key").get<std::string>();
  csv << ",status";
  for (const std::string& mk : metrics) csv << ',' << mk;
  csv << '\n';
  bool any_failed = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    char tag[16];
    std::snprintf(tag, sizeof tag, "point_%03zu", i);
    csv << tag;
    for (const auto& [key, v] : points[i].coords) {
      (void)key;
      csv << ',' << (v.is_string() ? v.get<std::string>() : v.dump());
    }
    csv << ',' << (outcomes[i].code == kExitOk ? "ok" : "failed");
    if (outcomes[i].code != kExitOk) any_failed = true;
    for (const std::string& mk : metrics)
      csv << ',' << metric_value(outcomes[i].report, mk);
    csv << '\n';
  }

  json summary;
  summary["command"] = command;
  summary["points"] = points.size();
  summary["failed"] =
      std::count_if(outcomes.begin(), outcomes.end(),
                    [](const Outcome& o) { return o.code != kExitOk; });
  emit_all(out_dir, "sweep", cfg,
           {{"sweep_summary.json", summary.dump(2) + "\n"},
            {"leaderboard.csv", csv.str()}});
  *exit_code = any_failed ? kExitVerifyFail : kExitOk;
  return summary;
}

int dispatch(const std::string& command, const json& cfg,
             const std::string& out_dir, const Options& opt, json* report) {
  int code = kExitOk;
  if (command == "torsion") {
    *report = run_torsion(cfg, out_dir);
  } else if (command == "eigs") {
    *report = run_eigs(cfg, out_dir);
  } else if (command == "gamma") {
    *report = run_gamma(cfg, out_dir);
  } else if (command == "optimize") {
    *report = run_optimize(cfg, out_dir, opt.seed);
  } else if (command == "verify") {
    *report = run_verify(cfg, out_dir, opt.seed, opt.filters, &code);
  } else {
    throw std::invalid_argument("unknown command '" + command + "'");
  }
  return code;
}

int guarded(const std::string& command, const Options& opt) {
  try {
    const json cfg = load_config(opt.config_path);
    const std::string out_dir =
        opt.out_dir.empty() ? "out-" + command : opt.out_dir;
    log_line(1, "spectropt " + command + " -> " + out_dir);
    json report;
    int code;
    if (command == "sweep") {
      json sweep_report = run_sweep(cfg, out_dir, opt, &code);
      return code;
    }
    code = dispatch(command, cfg, out_dir, opt, &report);
    return code;
  } catch (const std::invalid_argument& e) {
    error_record(kExitConfig, e.what());
    return kExitConfig;
  } catch (const SolverError& e) {
    error_record(kExitSolver, e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    error_record(kExitSolver, e.what());
    return kExitSolver;
  }
}

}  // namespace

int cmd_torsion(const Options& opt) { return guarded("torsion", opt); }
int cmd_eigs(const Options& opt) { return guarded("eigs", opt); }
int cmd_gamma(const Options& opt) { return guarded("gamma", opt); }
int cmd_optimize(const Options& opt) { return guarded("optimize", opt); }
int cmd_verify(const Options& opt) { return guarded("verify", opt); }
int cmd_sweep(const Options& opt) { return guarded("sweep", opt); }

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"spectral optimization laboratory"};
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"torsion", "solve the torsion problem for a potential"},
      {"eigs", "compute the low spectrum of a potential"},
      {"gamma", "gamma distance between two potentials"},
      {"optimize", "run a spectral optimizer"},
      {"verify", "run the verification suite"},
      {"sweep", "run a command over a parameter grid"}};
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--jobs", opt.jobs, "worker threads for sweep points")
        ->check(CLI::PositiveNumber);
    sub->add_option("--filter", opt.filters,
                    "verify: run only checks whose name contains a filter")
        ->delimiter(',');
  }

  std::vector<const char*> argv;
  argv.push_back("spectropt");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kExitOk;
    error_record(kExitConfig, e.what());
    return kExitConfig;
  }

  for (const auto& [name, desc] : commands) {
    (void)desc;
    if (app.got_subcommand(name)) {
      if (name == "torsion") return cmd_torsion(opt);
      if (name == "eigs") return cmd_eigs(opt);
      if (name == "gamma") return cmd_gamma(opt);
      if (name == "optimize") return cmd_optimize(opt);
      if (name == "verify") return cmd_verify(opt);
      return cmd_sweep(opt);
    }
  }
  error_record(kExitConfig, "no command given");
  return kExitConfig;
}

}  // namespace spectropt::cli
