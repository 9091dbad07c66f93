#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <stdexcept>

#include "fibermetric/config.hpp"
#include "fibermetric/curvature.hpp"
#include "fibermetric/experiments.hpp"
#include "fibermetric/io.hpp"
#include "fibermetric/manifest.hpp"
#include "fibermetric/runner.hpp"
#include "fibermetric/sequences.hpp"
#include "fibermetric/sobolev.hpp"

namespace fm {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Output plumbing.  All writes go through one sink so the emitted file list
// is complete and ordered deterministically.

struct FileSink {
  fs::path dir;
  std::vector<std::string> names;

  fs::path open(const std::string& name) {
    names.push_back(name);
    return dir / name;
  }
};

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << body;
  if (!out) throw std::runtime_error("short write: " + p.string());
}

void write_json_file(const fs::path& p, const Json& j) {
  write_text(p, j.dump(2) + "\n");
}

// CSV image of a convergence table (timings deliberately omitted so table
// bytes are reproducible across machines)
void write_table_csv(FileSink& sink, const std::string& name,
                     const std::string& param_name, const ConvergenceTable& tab) {
  std::vector<std::string> header = {param_name, tab.primary_name};
  for (const auto& s : tab.secondary_names) header.push_back(s);
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : tab.rows) {
    std::vector<std::string> row = {csv_number(r.parameter),
                                    csv_number(r.primary)};
    for (double s : r.secondary) row.push_back(csv_number(s));
    rows.push_back(std::move(row));
  }
  write_csv(sink.open(name), header, rows);
}

Json table_summary(const ConvergenceTable& tab) {
  Json extras = Json::object();
  for (const auto& [k, v] : tab.summary) extras[k] = v;
  return Json{{"name", tab.name},
              {"fitted_order", tab.fitted_order},
              {"verdict", tab.verdict},
              {"extras", extras}};
}

bool bounded_within(const std::vector<double>& vals, double factor,
                    double floor = 1e-12) {
  double lo = 1e300, hi = 0.0;
  for (double v : vals) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= floor) return true;
  return hi <= factor * std::max(lo, floor);
}

// ---------------------------------------------------------------------------
// Parameter helpers

FamilyConfig family_param(const Json& params) {
  if (!params.contains("family"))
    throw std::runtime_error("config error at '$.parameters.family': "
                             "missing required key");
  return family_from_json(params["family"], "$.parameters.family");
}

Schedule schedule_param(const Json& params, const char* key = "schedule") {
  if (!params.contains(key))
    throw std::runtime_error(std::string("config error at '$.parameters.") +
                             key + "': missing required key");
  return schedule_from_json(params[key], std::string("$.parameters.") + key);
}

struct RunOutcome {
  bool verdict = false;
  Json summary;
};

// ---------------------------------------------------------------------------
// Experiments

RunOutcome run_solve_fiber(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family"}, {"tol"});
  const FamilyConfig fam = family_param(cfg.parameters);
  const double tol = get_number_or(cfg.parameters, "$.parameters", "tol", 1e-8);
  const FiberProblem p = fiber_problem_at(fam, fam.base.center);
  const FiberSolution sol = solve_fiber(p);
  write_fld(sink.open("phi.fld"), sol.phi);
  RunOutcome out;
  out.verdict = sol.residual_inf <= tol;
  out.summary = Json{{"residual_inf", sol.residual_inf},
                     {"newton_iters", sol.newton_iters},
                     {"normalization_value", sol.normalization_value},
                     {"tol", tol}};
  return out;
}

RunOutcome run_solve_family(const ExperimentConfig& cfg, int workers,
                            FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family"}, {"tol"});
  const FamilyConfig fam = family_param(cfg.parameters);
  const double tol = get_number_or(cfg.parameters, "$.parameters", "tol", 1e-8);
  const FamilySolution sol = solve_family(fam, workers);
  double max_residual = 0.0;
  for (const auto& fr : sol.fibers)
    max_residual = std::max(max_residual, fr.residual);
  const CurvatureReport rep = semipositivity_report(sol);

  const std::size_t a0 = fam.base.m_side / 2, b0 = fam.base.m_side / 2;
  write_fld(sink.open("phi_center.fld"), sol.at(a0, b0).phi);
  {
    auto frames = std::make_shared<FamilyFrames>(sol);
    FamilyGeometry geo(frames, LiftKind::horizontal);
    write_fld(sink.open("c_center.fld"), *geo.c_memo(a0, b0));
  }
  RunOutcome out;
  out.verdict = max_residual <= tol;
  out.summary = Json{{"max_residual", max_residual},
                     {"min_c", rep.min_c},
                     {"max_c", rep.max_c},
                     {"min_fiber_coeff", rep.min_fiber_coeff},
                     {"max_cross_check", rep.max_cross_check},
                     {"positivity", rep.positivity},
                     {"identity_1_29", rep.identity_residuals.at("identity_1_29")},
                     {"tol", tol}};
  return out;
}

RunOutcome run_identity_129(const ExperimentConfig& cfg, int workers,
                            FileSink&) {
  require_keys(cfg.parameters, "$.parameters", {"family"},
               {"tol", "refine", "min_drop"});
  const FamilyConfig fam = family_param(cfg.parameters);
  const double tol = get_number_or(cfg.parameters, "$.parameters", "tol", 1e-6);
  const double min_drop =
      get_number_or(cfg.parameters, "$.parameters", "min_drop", 3.0);
  const bool refine = cfg.parameters.value("refine", false);

  const FamilySolution sol = solve_family(fam, workers);
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  const IdentityStats stats = identity_residual_1_29_stats(geo);

  RunOutcome out;
  out.summary = Json{{"residual", stats.residual},
                     {"lhs_scale", stats.lhs_scale},
                     {"samples", stats.samples},
                     {"tol", tol}};
  out.verdict = stats.residual <= tol;
  if (refine) {
    FamilyConfig fine = fam;
    fine.n_side = 2 * fam.n_side;
    fine.base = BaseGrid(2 * (fam.base.m_side - 1) + 1, fam.base.center,
                         fam.base.half_x, fam.base.half_y);
    const FamilySolution fsol = solve_family(fine, workers);
    auto fframes = std::make_shared<FamilyFrames>(fsol);
    FamilyGeometry fgeo(fframes, LiftKind::horizontal);
    const IdentityStats fstats = identity_residual_1_29_stats(fgeo);
    const double drop =
        fstats.residual > 0.0 ? stats.residual / fstats.residual : 1e300;
    out.summary["residual_fine"] = fstats.residual;
    out.summary["drop_factor"] = drop;
    out.summary["min_drop"] = min_drop;
    out.verdict = out.verdict && drop >= min_drop;
  }
  return out;
}

RunOutcome run_identity_248(const ExperimentConfig& cfg, int workers,
                            FileSink&) {
  require_keys(cfg.parameters, "$.parameters", {"family"},
               {"tol", "lambda_shift", "probe_factor", "lift", "refine",
                "min_drop"});
  const FamilyConfig fam = family_param(cfg.parameters);
  const double tol = get_number_or(cfg.parameters, "$.parameters", "tol", 1e-6);
  const double shift =
      get_number_or(cfg.parameters, "$.parameters", "lambda_shift", 0.1);
  const double probe_factor =
      get_number_or(cfg.parameters, "$.parameters", "probe_factor", 0.05);
  const double min_drop =
      get_number_or(cfg.parameters, "$.parameters", "min_drop", 3.0);
  const bool refine = cfg.parameters.value("refine", false);
  const std::string lift_s = cfg.parameters.value("lift", "coordinate");
  LiftKind lift = LiftKind::coordinate;
  if (lift_s == "horizontal") lift = LiftKind::horizontal;
  else if (lift_s == "coordinate") lift = LiftKind::coordinate;
  else if (lift_s == "log_tangent") lift = LiftKind::log_tangent;
  else throw std::runtime_error(
      "config error at '$.parameters.lift': unknown lift '" + lift_s + "'");

  auto residual_at = [&](const FamilyConfig& f, IdentityStats& on_shell,
                         IdentityStats& probed) {
    const FamilySolution sol = solve_family(f, workers);
    auto frames = std::make_shared<FamilyFrames>(sol);
    FamilyGeometry geo(frames, lift);
    on_shell = lie_identity_residual_2_48_stats(geo);
    probed = lie_identity_residual_2_48_stats(geo, shift);
  };

  IdentityStats stats, probe;
  residual_at(fam, stats, probe);
  const double probe_floor = probe_factor * stats.vphi_scale;

  RunOutcome out;
  out.summary = Json{{"residual", stats.residual},
                     {"vphi_scale", stats.vphi_scale},
                     {"probe_residual", probe.residual},
                     {"probe_floor", probe_floor},
                     {"lambda_shift", shift},
                     {"tol", tol}};
  out.verdict = stats.residual <= tol && probe.residual >= probe_floor;
  if (refine) {
    FamilyConfig fine = fam;
    fine.n_side = 2 * fam.n_side;
    fine.base = BaseGrid(2 * (fam.base.m_side - 1) + 1, fam.base.center,
                         fam.base.half_x, fam.base.half_y);
    IdentityStats fstats, fprobe;
    residual_at(fine, fstats, fprobe);
    const double drop =
        fstats.residual > 0.0 ? stats.residual / fstats.residual : 1e300;
    out.summary["residual_fine"] = fstats.residual;
    out.summary["drop_factor"] = drop;
    out.summary["min_drop"] = min_drop;
    out.verdict = out.verdict && drop >= min_drop;
  }
  return out;
}

RunOutcome table_outcome(const ConvergenceTable& tab, const char* param_name,
                         FileSink& sink) {
  write_table_csv(sink, "table.csv", param_name, tab);
  RunOutcome out;
  out.verdict = tab.verdict;
  out.summary = table_summary(tab);
  return out;
}

RunOutcome run_lemma14(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family", "schedule"}, {});
  const FamilyConfig fam = family_param(cfg.parameters);
  const Schedule sched = schedule_param(cfg.parameters);
  const ConvergenceTable tab =
      lemma_1_4_experiment(fiber_problem_at(fam, fam.base.center), sched);
  return table_outcome(tab, schedule_param_name(sched.parameter).c_str(), sink);
}

RunOutcome run_smoothing(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family", "schedule"}, {});
  const FamilyConfig fam = family_param(cfg.parameters);
  const Schedule sched = schedule_param(cfg.parameters);
  const ConvergenceTable tab = smoothing_convergence(fam, sched);
  return table_outcome(tab, "delta", sink);
}

RunOutcome run_centering(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family", "schedule"}, {});
  const FamilyConfig fam = family_param(cfg.parameters);
  const Schedule sched = schedule_param(cfg.parameters);
  const ConvergenceTable tab = curvature_centering(fam, sched);
  return table_outcome(tab, "delta", sink);
}

RunOutcome run_transverse(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family", "schedule"},
               {"N_multiplier"});
  const FamilyConfig fam = family_param(cfg.parameters);
  const Schedule sched = schedule_param(cfg.parameters);
  const int N = int(get_number_or(cfg.parameters, "$.parameters",
                                  "N_multiplier", 2.0));
  const ConvergenceTable tab = transverse_diagnostics(fam, sched, N);
  return table_outcome(tab, "epsilon", sink);
}

RunOutcome run_gradient(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family", "schedule"}, {});
  const FamilyConfig fam = family_param(cfg.parameters);
  const Schedule sched = schedule_param(cfg.parameters);
  const ConvergenceTable tab =
      gradient_diagnostic(fiber_problem_at(fam, fam.base.center), sched);
  return table_outcome(tab, "epsilon", sink);
}

RunOutcome run_ratio(const ExperimentConfig& cfg, FileSink& sink,
                     bool poincare) {
  require_keys(cfg.parameters, "$.parameters",
               {"n_side", "tau", "divisor", "p", "epsilons", "n_samples"},
               {"n_seeds", "factor"});
  const Json& p = cfg.parameters;
  const int n = int(get_number(p, "$.parameters", "n_side"));
  const cplx tau = get_complex_or(p, "$.parameters", "tau", cplx(0.0, 1.0));
  const MarkedDivisor div =
      divisor_from_json(p["divisor"], "$.parameters.divisor");
  const double pexp = get_number(p, "$.parameters", "p");
  const int n_samples = int(get_number(p, "$.parameters", "n_samples"));
  const int n_seeds = int(get_number_or(p, "$.parameters", "n_seeds", 2.0));
  const double factor = get_number_or(p, "$.parameters", "factor", 2.0);
  if (!p["epsilons"].is_array() || p["epsilons"].empty())
    throw std::runtime_error(
        "config error at '$.parameters.epsilons': expected a non-empty array");
  std::vector<double> epsilons;
  for (const auto& e : p["epsilons"]) {
    if (!e.is_number())
      throw std::runtime_error(
          "config error at '$.parameters.epsilons': expected numbers");
    epsilons.push_back(e.get<double>());
  }

  const TorusGrid grid(std::size_t(n), tau);
  std::vector<std::string> header = {"epsilon"};
  for (int s = 0; s < n_seeds; ++s)
    header.push_back("ratio_seed" + std::to_string(s));
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<double>> per_seed(static_cast<std::size_t>(n_seeds));
  for (double eps : epsilons) {
    std::vector<std::string> row = {csv_number(eps)};
    for (int s = 0; s < n_seeds; ++s) {
      const std::uint64_t seed = cfg.seed + std::uint64_t(s);
      const double r =
          poincare ? poincare_ratio(grid, div, pexp, eps, n_samples, seed)
                   : sobolev_ratio(grid, div, pexp, eps, n_samples, seed);
      per_seed[std::size_t(s)].push_back(r);
      row.push_back(csv_number(r));
    }
    rows.push_back(std::move(row));
  }
  write_csv(sink.open("table.csv"), header, rows);

  bool verdict = true;
  double lo = 1e300, hi = 0.0;
  for (const auto& vals : per_seed) {
    verdict = verdict && bounded_within(vals, factor);
    for (double v : vals) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  RunOutcome out;
  out.verdict = verdict;
  out.summary = Json{{"ratio_min", lo},
                     {"ratio_max", hi},
                     {"factor", factor},
                     {"p", pexp},
                     {"n_samples", n_samples},
                     {"n_seeds", n_seeds}};
  return out;
}

RunOutcome run_sequences(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"n_max"}, {});
  const int n_max = int(get_number(cfg.parameters, "$.parameters", "n_max"));
  if (n_max < 1 || n_max > 6)
    throw std::runtime_error(
        "config error at '$.parameters.n_max': expected 1 <= n_max <= 6 "
        "(exact 64-bit rational range)");

  std::vector<std::string> header = {"n",        "k",        "p_recursion",
                                     "p_closed", "q_recursion", "q_closed",
                                     "p_match",  "q_match"};
  std::vector<std::vector<std::string>> rows;
  bool all_match = true;
  Json finals = Json::array();
  for (int n = 1; n <= n_max; ++n) {
    const SequenceTable tab = iteration_sequences(n, n + 1);
    for (const auto& r : tab.rows) {
      rows.push_back({std::to_string(n), std::to_string(r.k),
                      r.p_recursion.str(), r.p_closed.str(),
                      r.q_recursion.str(), r.q_closed.str(),
                      r.p_match ? "1" : "0", r.q_match ? "1" : "0"});
      all_match = all_match && r.p_match && r.q_match;
    }
    finals.push_back(Json{{"n", n},
                          {"q_final_recursion", tab.q_final_recursion.str()},
                          {"q_final_printed", tab.q_final_printed.str()},
                          {"matches_printed", tab.q_final_matches_printed}});
  }
  write_csv(sink.open("sequences.csv"), header, rows);
  RunOutcome out;
  out.verdict = all_match;
  out.summary = Json{{"all_closed_forms_match", all_match},
                     {"q_final_comparison", finals}};
  return out;
}

RunOutcome run_counterexample(const ExperimentConfig& cfg, int,
                              FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family", "a_schedule"},
               {"control_tol"});
  const FamilyConfig fam = family_param(cfg.parameters);
  const Schedule a_sched = schedule_param(cfg.parameters, "a_schedule");
  const double control_tol =
      get_number_or(cfg.parameters, "$.parameters", "control_tol", 1e-8);
  const CounterexampleResult res =
      counterexample_experiment(fam, a_sched, control_tol);

  {
    auto frames = std::make_shared<FamilyFrames>(fam);
    FamilyGeometry geo(frames, LiftKind::horizontal);
    const std::size_t a0 = fam.base.m_side / 2, b0 = fam.base.m_side / 2;
    write_fld(sink.open("c_center.fld"), *geo.c_memo(a0, b0));
  }
  write_table_csv(sink, "perturbation.csv", "eps_A", res.perturbation);

  auto loc = [](const ArgLocation& l) {
    return Json{{"t", Json::array({l.t.real(), l.t.imag()})},
                {"x", l.x},
                {"y", l.y}};
  };
  RunOutcome out;
  out.verdict = res.negative_interior && res.sign_stable &&
                res.control_semipositive && res.perturbation.verdict;
  out.summary = Json{{"min_c", res.coarse.min_c},
                     {"max_c", res.coarse.max_c},
                     {"argmin_c", loc(res.coarse.argmin_c)},
                     {"min_c_fine", res.fine.min_c},
                     {"control_min_c", res.control.min_c},
                     {"negative_interior", res.negative_interior},
                     {"sign_stable", res.sign_stable},
                     {"control_semipositive", res.control_semipositive},
                     {"perturbation_order", res.perturbation.fitted_order},
                     {"perturbation_verdict", res.perturbation.verdict},
                     {"control_tol", control_tol}};
  return out;
}

RunOutcome run_degeneration(const ExperimentConfig& cfg, int, FileSink& sink) {
  require_keys(cfg.parameters, "$.parameters", {"family", "imtau_targets"}, {});
  const FamilyConfig fam = family_param(cfg.parameters);
  const Json& targets = cfg.parameters["imtau_targets"];
  if (!targets.is_array() || targets.size() < 2)
    throw std::runtime_error(
        "config error at '$.parameters.imtau_targets': expected an array of "
        "at least two Im(tau) targets");
  // base points t_k = exp(-(target - Im tau0)) hit Im tau(t_k) = target for
  // the kappa = -2*pi log-degenerate recipe
  Schedule sched;
  sched.parameter = ScheduleParam::base_degeneration;
  double prev = -1e300;
  for (const auto& v : targets) {
    if (!v.is_number())
      throw std::runtime_error(
          "config error at '$.parameters.imtau_targets': expected numbers");
    const double target = v.get<double>();
    if (target < fam.tau.tau0.imag() || target <= prev)
      throw std::runtime_error(
          "config error at '$.parameters.imtau_targets': targets must "
          "increase from Im(tau0)");
    prev = target;
    sched.values.push_back(std::exp(-(target - fam.tau.tau0.imag())));
  }
  const ConvergenceTable tab = degeneration_experiment(fam, sched);
  return table_outcome(tab, "t", sink);
}

// ---------------------------------------------------------------------------
// Orchestration

using ExperimentFn = RunOutcome (*)(const ExperimentConfig&, int, FileSink&);

const std::map<std::string, ExperimentFn>& registry() {
  static const std::map<std::string, ExperimentFn> reg = {
      {"solve-fiber", run_solve_fiber},
      {"solve-family", run_solve_family},
      {"identity-129", run_identity_129},
      {"identity-248", run_identity_248},
      {"lemma14", run_lemma14},
      {"smoothing", run_smoothing},
      {"centering", run_centering},
      {"sobolev",
       [](const ExperimentConfig& c, int, FileSink& s) {
         return run_ratio(c, s, false);
       }},
      {"poincare",
       [](const ExperimentConfig& c, int, FileSink& s) {
         return run_ratio(c, s, true);
       }},
      {"sequences", run_sequences},
      {"transverse", run_transverse},
      {"gradient", run_gradient},
      {"counterexample", run_counterexample},
      {"degeneration", run_degeneration},
  };
  return reg;
}

struct ExecutedRun {
  bool verdict = false;
  std::vector<std::string> files;  // config.json, outputs, summary.json
  std::string config_sha256;
};

// writes config.json, experiment outputs, and summary.json into dir (no
// manifest); the echoed config carries the effective seed
ExecutedRun execute_into(const ExperimentConfig& cfg, int workers,
                         const fs::path& dir) {
  fs::create_directories(dir);
  FileSink sink{dir, {}};

  const std::string config_text =
      experiment_config_to_json(cfg).dump(2) + "\n";
  write_text(sink.open("config.json"), config_text);

  const auto it = registry().find(cfg.experiment);
  if (it == registry().end())
    throw std::runtime_error("unknown experiment: " + cfg.experiment);
  RunOutcome out = it->second(cfg, workers, sink);

  Json summary = Json{{"experiment", cfg.experiment},
                      {"verdict", out.verdict ? "pass" : "fail"},
                      {"results", out.summary}};
  write_json_file(sink.open("summary.json"), summary);

  ExecutedRun run;
  run.verdict = out.verdict;
  run.files = sink.names;
  run.config_sha256 = sha256_hex(config_text);
  return run;
}

ExperimentConfig load_config(const std::string& path, const RunOptions& opts) {
  ExperimentConfig cfg = parse_experiment_config(load_json_file(path));
  if (opts.seed_override) cfg.seed = *opts.seed_override;
  if (opts.out_override) cfg.output_dir = *opts.out_override;
  return cfg;
}

}  // namespace

int run_experiment(const std::string& config_path, const RunOptions& opts) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = load_config(config_path, opts);
    const fs::path dir = cfg.output_dir;

    RunManifest man;
    man.experiment = cfg.experiment;
    man.seed = cfg.seed;
    man.seed_overridden = opts.seed_override.has_value();
    man.workers = opts.workers;
    man.started_utc = utc_timestamp();

    const ExecutedRun run = execute_into(cfg, opts.workers, dir);

    man.config_sha256 = run.config_sha256;
    man.verdict = run.verdict;
    for (const auto& name : run.files) {
      const fs::path p = dir / name;
      man.files.push_back(ManifestFile{
          name, sha256_file(p), std::uint64_t(fs::file_size(p))});
    }
    man.finished_utc = utc_timestamp();
    man.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    write_manifest(dir, man);

    std::cout << cfg.experiment << ": "
              << (run.verdict ? "PASS" : "FAIL (verdict)") << "  ["
              << dir.string() << "]\n";
    return run.verdict ? kExitPass : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int replay_run(const std::string& run_dir, int workers) {
  try {
    const fs::path dir = run_dir;
    const RunManifest man = read_manifest(dir);
    const ExperimentConfig cfg =
        parse_experiment_config(load_json_file((dir / "config.json").string()));

    // the on-disk files must still match the manifest (tamper check) ...
    for (const auto& f : man.files) {
      const fs::path p = dir / f.name;
      if (!fs::exists(p)) {
        std::cerr << "replay mismatch: missing file " << f.name << '\n';
        return kExitFail;
      }
      if (sha256_file(p) != f.sha256) {
        std::cerr << "replay mismatch: " << f.name
                  << " differs from the manifest checksum\n";
        return kExitFail;
      }
    }

    // ... and a fresh execution must reproduce them bit-exactly
    const fs::path tmp = dir / ".replay_tmp";
    fs::remove_all(tmp);
    const ExecutedRun fresh = execute_into(cfg, workers, tmp);
    int status = kExitPass;
    for (const auto& f : man.files) {
      const fs::path p = tmp / f.name;
      if (!fs::exists(p) || sha256_file(p) != f.sha256) {
        std::cerr << "replay mismatch: " << f.name
                  << " not reproduced bit-exactly\n";
        status = kExitFail;
        break;
      }
    }
    if (status == kExitPass && fresh.files.size() != man.files.size()) {
      std::cerr << "replay mismatch: file count "
                << fresh.files.size() << " vs manifest " << man.files.size()
                << '\n';
      status = kExitFail;
    }
    fs::remove_all(tmp);
    if (status == kExitPass)
      std::cout << "replay: " << man.files.size()
                << " files reproduced bit-exactly\n";
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

namespace {

std::vector<std::vector<std::string>> parse_csv(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + p.string());
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t k = 0; k < body.size(); ++k) {
    const char c = body[k];
    if (quoted) {
      if (c == '"' && k + 1 < body.size() && body[k + 1] == '"') {
        cell += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      cell += c;
    }
  }
  if (!cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

int emit_plotdata(const std::string& run_dir) {
  try {
    const fs::path dir = run_dir;
    if (!fs::is_directory(dir)) {
      std::cerr << "error: not a directory: " << run_dir << '\n';
      return kExitError;
    }
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file()) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());

    int emitted = 0;
    for (const auto& p : entries) {
      if (p.extension() == ".fld") {
        const FldData d = read_fld(p);
        std::string body;
        const std::size_t n = d.n_side;
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            body += csv_number(double(i) / double(n)) + " " +
                    csv_number(double(j) / double(n)) + " " +
                    csv_number(d.re[k]);
            if (d.is_complex) body += " " + csv_number(d.im[k]);
            body += '\n';
          }
        const fs::path out = p.parent_path() / (p.stem().string() + ".xyz");
        write_text(out, body);
        std::cout << "wrote " << out.string() << '\n';
        ++emitted;
      } else if (p.extension() == ".csv") {
        const auto rows = parse_csv(p);
        if (rows.size() < 3 || rows[0].size() < 2) continue;
        std::string body = "# log10(" + rows[0][0] + ")  log10(" +
                           rows[0][1] + ")\n";
        std::vector<TableRow> fit_rows;
        for (std::size_t r = 1; r < rows.size(); ++r) {
          double x = 0.0, y = 0.0;
          try {
            x = std::stod(rows[r][0]);
            y = std::stod(rows[r][1]);
          } catch (...) {
            continue;
          }
          if (x <= 0.0 || y <= 0.0) continue;
          body += csv_number(std::log10(x)) + " " + csv_number(std::log10(y)) +
                  "\n";
          TableRow tr;
          tr.parameter = x;
          tr.primary = y;
          fit_rows.push_back(tr);
        }
        body += "# fitted order: " + csv_number(fitted_order(fit_rows)) + "\n";
        const fs::path out =
            p.parent_path() / (p.stem().string() + ".loglog.txt");
        write_text(out, body);
        std::cout << "wrote " << out.string() << '\n';
        ++emitted;
      }
    }
    if (emitted == 0)
      std::cout << "plotdata: no FLD1 or CSV inputs found in " << run_dir
                << '\n';
    return kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace fm
