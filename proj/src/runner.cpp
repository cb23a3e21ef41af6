#include "combforge/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "combforge/evolve.hpp"
#include "combforge/io.hpp"
#include "combforge/model.hpp"
#include "combforge/spectra.hpp"

namespace cf {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw Error("sha256 digest failed");
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

namespace {

namespace fs = std::filesystem;

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_keys(const Json& obj, const std::set<std::string>& allowed,
                const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + " must be an object", ctx);
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in " + ctx, key);
}

template <typename T>
T get_or(const Json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type", key);
  }
}

template <typename T>
T require(const Json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + ctx, key);
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type", key);
  }
}

const std::set<std::string> kGuessKeys = {
    "theta", "centers", "include_center_pulse", "tol", "max_iter", "damping",
    "restrict_even", "solution_file"};

Params parse_params(const Json& config) {
  const Json& pj = require<Json>(config, "params", "config");
  check_keys(pj, {"zeta", "f", "epsilon", "d"}, "params");
  Params p;
  p.zeta = require<double>(pj, "zeta", "params");
  p.f = require<double>(pj, "f", "params");
  p.epsilon = require<double>(pj, "epsilon", "params");
  if (pj.contains("d")) p.d = pj.at("d").get<double>();
  p.validate();
  return p;
}

Grid parse_grid(const Json& config) {
  const Json& gj = require<Json>(config, "grid", "config");
  check_keys(gj, {"period", "n"}, "grid");
  return Grid(require<double>(gj, "period", "grid"), require<int>(gj, "n", "grid"));
}

NewtonOpts parse_newton(const Json& opts) {
  NewtonOpts n;
  n.tol = get_or(opts, "tol", n.tol);
  n.max_iter = get_or(opts, "max_iter", n.max_iter);
  n.damping = get_or(opts, "damping", n.damping);
  n.restrict_even = get_or(opts, "restrict_even", n.restrict_even);
  return n;
}

double parse_theta(const Json& opts, const Params& p) {
  if (!opts.contains("theta")) return bifurcation_angles(p).theta_stable;
  const Json& t = opts.at("theta");
  if (t.is_number()) return t.get<double>();
  const std::string s = t.get<std::string>();
  if (s == "stable") return bifurcation_angles(p).theta_stable;
  if (s == "unstable") return bifurcation_angles(p).theta_unstable;
  throw ConfigError("theta must be a number, \"stable\", or \"unstable\"", "theta");
}

Solution solve_from_options(const Json& opts, const Params& p, const Grid& g) {
  SolitonTemplate tpl;
  tpl.theta = parse_theta(opts, p);
  tpl.centers = get_or(opts, "centers", std::vector<double>{});
  tpl.include_center_pulse = get_or(opts, "include_center_pulse", true);
  const Field2 guess = build_guess(tpl, p, g);
  return newton_solve(guess, p, parse_newton(opts));
}

Solution obtain_solution(const Json& opts, const Params& p, const Grid& g,
                         std::map<std::string, std::string>& inputs) {
  if (opts.contains("solution_file")) {
    const std::string path = opts.at("solution_file").get<std::string>();
    const std::string text = read_text(path);
    inputs[path] = sha256_hex(text);
    return solution_from_json(Json::parse(text));
  }
  return solve_from_options(opts, p, g);
}

std::vector<double> xi_grid_of(int count) {
  if (count < 4 || count % 2 != 0)
    throw ConfigError("xi_count must be even and >= 4", "xi_count");
  std::vector<double> xis(count);
  for (int i = 0; i < count; ++i) xis[i] = (2.0 * i - count) * M_PI / count;
  return xis;
}

std::string plot_script_comb(const std::string& csv_name) {
  return "set datafile separator ','\n"
         "set xlabel 'k'\n"
         "set ylabel 'log |u_hat(k)|'\n"
         "set title 'frequency comb'\n"
         "plot '" + csv_name + "' skip 1 using 1:2 with impulses notitle\n";
}

std::string plot_script_sweep(const std::string& csv_name) {
  return "set datafile separator ','\n"
         "set xlabel 'Re lambda'\n"
         "set ylabel 'Im lambda'\n"
         "set title 'Bloch spectrum'\n"
         "plot '" + csv_name + "' skip 1 using 2:3 with points pt 7 ps 0.3 notitle\n";
}

struct Emitter {
  fs::path dir;
  std::map<std::string, std::string> digests;
  void operator()(const std::string& name, const std::string& content) {
    write_text((dir / name).string(), content);
    digests[name] = sha256_hex(content);
  }
};

struct VerifyCheck {
  std::string id;
  std::string what;
  bool pass;
};

std::vector<VerifyCheck> run_verify(const Json& opts, const Params& p, const Grid& g,
                                    int threads, Emitter& emit, Json& summary) {
  const std::string scenario = get_or<std::string>(opts, "scenario", "stable");
  if (scenario != "stable" && scenario != "unstable")
    throw ConfigError("scenario must be \"stable\" or \"unstable\"", "scenario");
  std::vector<VerifyCheck> checks;

  const BifurcationAngles ang = bifurcation_angles(p);
  const double id_err =
      std::abs(M_PI * p.f * std::cos(ang.theta_stable) - 2.0 * std::sqrt(2.0 * p.zeta));
  checks.push_back({"bifurcation-angle", "pi f cos(theta) = 2 sqrt(2 zeta)", id_err < 1e-12});

  SolitonTemplate tpl;
  tpl.theta = scenario == "stable" ? ang.theta_stable : ang.theta_unstable;
  tpl.include_center_pulse = true;
  const Solution sol = newton_solve(build_guess(tpl, p, g), p, NewtonOpts{});
  checks.push_back({"residual", "stationary residual < 1e-8", sol.residual_norm < 1e-8});
  emit("solution.json", solution_to_json(sol).dump(2) + "\n");
  emit("solution.csv", solution_csv(sol));

  SweepOpts sopts;
  sopts.threads = threads;
  const BlochSweep sw = sweep(sol, xi_grid_of(get_or(opts, "xi_count", 32)), sopts);
  emit("sweep.json", sweep_to_json(sw).dump(2) + "\n");
  emit("sweep.csv", sweep_csv(sw));
  if (scenario == "stable")
    checks.push_back({"spectrum", "no unstable Bloch modes, simple zero",
                      sw.verdict.max_unstable_re <= sopts.zero_deadband &&
                          sw.verdict.zero_simple});
  else
    checks.push_back(
        {"spectrum", "unstable mode present", sw.verdict.max_unstable_re > 0.0});

  const AprioriBox box = apriori_box(sol);
  checks.push_back({"apriori-box", "|Re lambda| < |zeta| + 4 rho^2 near the axis",
                    apriori_box_check(box, p, sw.slices)});

  std::vector<double> ks(512);
  for (int i = 0; i < 512; ++i) ks[i] = -8.0 + 16.0 * i / 511.0;
  checks.push_back({"essential-line", "constant-state spectrum on Re = -eps",
                    essential_line_check(p, ks) < 1e-12});

  bool evolve_ok = true;
  std::string evolve_note = "bounded";
  try {
    const Field2 pert = random_perturbation(sol.field.grid, 1e-3, 7);
    const EvolutionTrace tr = evolve_perturbed(sol, pert, 1, 10.0);
    emit("trace.csv", trace_csv(tr));
    if (scenario == "stable" && tr.perturbation_l2.back() > 10 * tr.perturbation_l2.front())
      evolve_ok = false;
  } catch (const Blowup&) {
    evolve_ok = scenario != "stable";
    evolve_note = "blowup";
  }
  checks.push_back({"evolution", "short time evolution " + evolve_note, evolve_ok});

  summary["scenario"] = scenario;
  summary["residual_norm"] = sol.residual_norm;
  summary["verdict"] = sweep_to_json(sw)["verdict"];
  return checks;
}

int execute(const std::string& task, const Json& config, const std::string& out_override,
            int threads) {
  check_keys(config, {"task", "params", "grid", "options", "output_dir", "emit_plots"},
             "config");
  if (config.contains("task") && config.at("task").get<std::string>() != task)
    throw ConfigError("config task '" + config.at("task").get<std::string>() +
                          "' does not match the subcommand '" + task + "'",
                      "task");
  const Params p = parse_params(config);
  const Grid g = parse_grid(config);
  const bool emit_plots = get_or(config, "emit_plots", false);
  const Json opts = config.contains("options") ? config.at("options") : Json::object();

  std::string out_dir = out_override;
  if (out_dir.empty()) out_dir = get_or<std::string>(config, "output_dir", "");
  if (out_dir.empty()) throw ConfigError("no output directory given", "output_dir");
  fs::create_directories(out_dir);

  const std::string started = iso_now();
  const auto t0 = std::chrono::steady_clock::now();
  Emitter emit{out_dir, {}};
  std::map<std::string, std::string> inputs;
  Json summary;
  int exit_code = 0;

  if (task == "solve") {
    check_keys(opts, kGuessKeys, "options");
    const Solution sol = solve_from_options(opts, p, g);
    emit("solution.json", solution_to_json(sol).dump(2) + "\n");
    emit("solution.csv", solution_csv(sol));
    summary["residual_norm"] = sol.residual_norm;
    summary["pulse_centers"] = sol.pulse_centers;
    summary["is_even"] = sol.is_even;
  } else if (task == "continue") {
    auto keys = kGuessKeys;
    keys.insert("epsilon_path");
    check_keys(opts, keys, "options");
    const auto eps_path = require<std::vector<double>>(opts, "epsilon_path", "options");
    SolitonTemplate tpl;
    tpl.theta = parse_theta(opts, p);
    tpl.centers = get_or(opts, "centers", std::vector<double>{});
    tpl.include_center_pulse = get_or(opts, "include_center_pulse", true);
    std::vector<Params> path;
    for (double e : eps_path) {
      Params q = p;
      q.epsilon = e;
      path.push_back(q);
    }
    Params p0 = p;
    p0.epsilon = eps_path.empty() ? p.epsilon : eps_path.front();
    const auto sols = continue_in(path, build_guess(tpl, p0, g), parse_newton(opts));
    std::string csv = "epsilon,residual_norm,sup_norm\n";
    for (const Solution& s : sols)
      csv += format17(s.params.epsilon) + "," + format17(s.residual_norm) + "," +
             format17(s.field.sup_norm()) + "\n";
    emit("continuation.csv", csv);
    emit("solution.json", solution_to_json(sols.back()).dump(2) + "\n");
    summary["steps"] = sols.size();
    summary["final_residual_norm"] = sols.back().residual_norm;
  } else if (task == "sweep") {
    auto keys = kGuessKeys;
    keys.insert({"xi_count", "xi_exclusion", "zero_deadband"});
    check_keys(opts, keys, "options");
    const Solution sol = obtain_solution(opts, p, g, inputs);
    SweepOpts sopts;
    sopts.threads = threads;
    sopts.xi_exclusion = get_or(opts, "xi_exclusion", sopts.xi_exclusion);
    sopts.zero_deadband = get_or(opts, "zero_deadband", sopts.zero_deadband);
    const BlochSweep sw = sweep(sol, xi_grid_of(get_or(opts, "xi_count", 32)), sopts);
    const AprioriBox box = apriori_box(sol);
    Json sj = sweep_to_json(sw);
    sj["apriori_box_ok"] = apriori_box_check(box, sol.params, sw.slices);
    emit("sweep.json", sj.dump(2) + "\n");
    emit("sweep.csv", sweep_csv(sw));
    if (emit_plots) emit("plot_sweep.gp", plot_script_sweep("sweep.csv"));
    summary["verdict"] = sj["verdict"];
    summary["apriori_box_ok"] = sj["apriori_box_ok"];
  } else if (task == "small-eigs") {
    auto keys = kGuessKeys;
    keys.insert({"delta0", "check_window", "deadband"});
    check_keys(opts, keys, "options");
    const Solution sol = obtain_solution(opts, p, g, inputs);
    SmallEigOpts seopts;
    seopts.deadband = get_or(opts, "deadband", seopts.deadband);
    seopts.check_window = get_or(opts, "check_window", false);
    const SmallEigReport rep =
        small_eigs(sol, require<double>(opts, "delta0", "options"), seopts);
    emit("small_eigs.json", small_eigs_to_json(rep).dump(2) + "\n");
    summary["n_small"] = rep.eigenvalues.size();
    summary["zero_is_simple"] = rep.zero_is_simple;
  } else if (task == "evolve") {
    auto keys = kGuessKeys;
    keys.insert({"copies", "t_end", "dt", "sample_interval", "seed", "amplitude"});
    check_keys(opts, keys, "options");
    const Solution sol = obtain_solution(opts, p, g, inputs);
    const int copies = get_or(opts, "copies", 1);
    EvolveOpts eopts;
    eopts.dt = get_or(opts, "dt", eopts.dt);
    eopts.sample_interval = get_or(opts, "sample_interval", eopts.sample_interval);
    const Grid big(sol.field.grid.period * copies, sol.field.grid.n * copies);
    const Field2 pert = random_perturbation(
        big, get_or(opts, "amplitude", 1e-3), get_or<std::uint64_t>(opts, "seed", 0));
    const EvolutionTrace tr =
        evolve_perturbed(sol, pert, copies, require<double>(opts, "t_end", "options"), eopts);
    emit("trace.csv", trace_csv(tr));
    summary["final_raw_l2"] = tr.raw_l2.back();
    summary["final_mod_l2"] = tr.perturbation_l2.back();
  } else if (task == "diffusive") {
    auto keys = kGuessKeys;
    keys.insert({"copies", "t_end", "dt", "sample_interval", "seed",
                 "perturbation_size", "fit_fraction", "tail_threshold"});
    check_keys(opts, keys, "options");
    const Solution sol = obtain_solution(opts, p, g, inputs);
    DiffusiveOpts dopts;
    dopts.evolve.dt = get_or(opts, "dt", dopts.evolve.dt);
    dopts.evolve.sample_interval = get_or(opts, "sample_interval", dopts.evolve.sample_interval);
    dopts.perturbation_size = get_or(opts, "perturbation_size", dopts.perturbation_size);
    dopts.fit_fraction = get_or(opts, "fit_fraction", dopts.fit_fraction);
    dopts.tail_threshold = get_or(opts, "tail_threshold", dopts.tail_threshold);
    const DiffusiveResult res = diffusive_experiment(
        sol, get_or(opts, "copies", 32), get_or<std::uint64_t>(opts, "seed", 0),
        require<double>(opts, "t_end", "options"), dopts);
    emit("trace.csv", trace_csv(res.trace));
    Json dj;
    dj["fitted_exponent_raw"] = res.fitted_exponent_raw;
    dj["fitted_exponent_mod"] = res.fitted_exponent_mod;
    dj["degenerate"] = res.degenerate;
    emit("diffusive.json", dj.dump(2) + "\n");
    summary = dj;
  } else if (task == "comb") {
    check_keys(opts, kGuessKeys, "options");
    const Solution sol = obtain_solution(opts, p, g, inputs);
    emit("comb.csv", comb_csv(comb(sol.field)));
    if (emit_plots) emit("plot_comb.gp", plot_script_comb("comb.csv"));
    summary["sup_norm"] = sol.field.sup_norm();
  } else if (task == "verify") {
    check_keys(opts, {"scenario", "xi_count"}, "options");
    const auto checks = run_verify(opts, p, g, threads, emit, summary);
    Json table = Json::array();
    std::string first_fail;
    for (const VerifyCheck& c : checks) {
      std::printf("%s  %-18s %s\n", c.pass ? "PASS" : "FAIL", c.id.c_str(),
                  c.what.c_str());
      table.push_back(Json{{"id", c.id}, {"what", c.what}, {"pass", c.pass}});
      if (!c.pass && first_fail.empty()) first_fail = c.id;
    }
    summary["checks"] = table;
    if (!first_fail.empty()) {
      std::fprintf(stderr, "{\"error\":{\"type\":\"VerifyFailed\",\"message\":\"criterion %s failed\"}}\n",
                   first_fail.c_str());
      exit_code = 2;
    }
  } else {
    throw ConfigError("unknown task '" + task + "'", "task");
  }

  const auto t1 = std::chrono::steady_clock::now();
  Json manifest;
  manifest["tool"] = "combforge";
  manifest["version"] = kVersion;
  manifest["task"] = task;
  manifest["config"] = config;
  manifest["started"] = started;
  manifest["finished"] = iso_now();
  manifest["wall_seconds"] = std::chrono::duration<double>(t1 - t0).count();
  manifest["inputs"] = inputs;
  manifest["outputs"] = emit.digests;
  manifest["summary"] = summary;
  write_text((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  return exit_code;
}

void print_error(const char* type, const std::string& message, const std::string& key) {
  Json e;
  e["error"] = Json{{"type", type}, {"message", message}};
  if (!key.empty()) e["error"]["key"] = key;
  std::cerr << e.dump() << "\n";
}

}  // namespace

int run_task(const std::string& task, const std::string& config_path,
             std::string output_dir, int threads) {
  try {
    Json config;
    try {
      config = Json::parse(read_text(config_path));
    } catch (const nlohmann::json::parse_error& e) {
      print_error("ParseError", e.what(), "");
      return 1;
    }
    return execute(task, config, output_dir, threads);
  } catch (const ConfigError& e) {
    print_error("ConfigError", e.what(), e.key);
    return 1;
  } catch (const nlohmann::json::exception& e) {
    print_error("ConfigError", e.what(), "");
    return 1;
  } catch (const NumericalError& e) {
    print_error("NumericalError", e.what(), "");
    return 2;
  } catch (const std::exception& e) {
    print_error("Error", e.what(), "");
    return 2;
  }
}

}  // namespace cf
