// Command-line front end: named experiments around the radial standing-wave
// machinery. Each run writes CSV/JSON artifacts into --out and echoes the
// resolved scenario for reproducibility.
//
// Exit codes: 0 success, 2 validation/regime error, 3 solver failure,
// 4 outcome contradicts the scenario's expectation.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <semaphore>
#include <sstream>

#include "inls/dynamics.hpp"
#include "inls/io.hpp"
#include "inls/normalized.hpp"

using namespace inls;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitExpectation = 4;

struct Scenario {
  std::string name = "run";
  int N = 3;
  std::string b = "1";
  std::string p = "3";
  double omega = 1.0;
  bool has_omega = true;
  double R = 0.0;  // 0: pick max(12, 10/sqrt(omega))
  int M = 4096;
  std::string out = "out";
  std::uint64_t seed = 1;
  // kind-specific knobs
  double T = 10.0;
  double sample_dt = 0.05;
  double epsilon = 1e-2;
  double lambda = 0.2;
  double c_mass = 0.0;  // 0: use c_factor * ||Q1||^2
  double c_factor = 1.0;
  double c_min_factor = 0.5, c_max_factor = 8.0;
  int c_count = 5;
  std::vector<double> omegas{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> lambdas{1.01, 1.1};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int trials = 20;
  bool minimize = false;
  std::string input;
  std::string expect = "none";  // none | global | blowup
};

ModelParams params_of(const Scenario& s) {
  ModelParams p;
  p.N = s.N;
  p.b_exact = Rational::parse(s.b);
  p.p_exact = Rational::parse(s.p);
  if (!p.b_exact || !p.p_exact)
    throw std::domain_error("b and p must be numbers (decimals or fractions)");
  p.b = p.b_exact->value();
  p.p = p.p_exact->value();
  if (s.has_omega) p.omega = s.omega;
  return p;
}

GridPtr grid_of(const Scenario& s, double omega) {
  const double R = s.R > 0.0 ? s.R : std::max(12.0, 10.0 / std::sqrt(omega));
  return make_grid(s.N, R, s.M);
}

void emit_error(int code, const std::string& kind, const std::string& message) {
  json j{{"error", {{"kind", kind}, {"message", message}, {"exit", code}}}};
  std::cerr << j.dump() << "\n";
}

int thread_cap() {
  if (const char* env = std::getenv("INLS_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs jobs with bounded parallelism, returning results in input order.
template <class Fn>
auto run_parallel(int n, Fn&& fn) {
  using Result = std::invoke_result_t<Fn, int>;
  std::counting_semaphore<256> gate(std::min(thread_cap(), 256));
  std::vector<std::future<Result>> futs;
  futs.reserve(n);
  for (int i = 0; i < n; ++i)
    futs.emplace_back(std::async(std::launch::async, [&gate, &fn, i] {
      gate.acquire();
      struct Release {
        std::counting_semaphore<256>& g;
        ~Release() { g.release(); }
      } rel{gate};
      return fn(i);
    }));
  std::vector<Result> out;
  out.reserve(n);
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

void write_scenario_echo(const Scenario& s, const std::string& kind, const json& extra) {
  json j{{"name", s.name},
         {"kind", kind},
         {"params", {{"N", s.N}, {"b", s.b}, {"p", s.p}}},
         {"grid", {{"R", s.R}, {"M", s.M}}},
         {"seed", s.seed},
         {"out", s.out}};
  if (s.has_omega) j["params"]["omega"] = s.omega;
  j.update(extra);
  write_text((fs::path(s.out) / "scenario.json").string(), j.dump(2) + "\n");
}

GroundState solve_at(const Scenario& s, double omega) {
  return solve_profile_shooting(params_of(s).with_omega(omega), grid_of(s, omega));
}

int cmd_ground_state(const Scenario& s) {
  GroundState q = solve_at(s, s.omega);
  write_field_csv(q.profile, (fs::path(s.out) / "profile.csv").string());
  json j = groundstate_to_json(q);
  j["functionals"] = report_to_json(q.functionals(), q.params);
  write_text((fs::path(s.out) / "groundstate.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "ground-state", {});
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_identities(const Scenario& s) {
  ModelParams params = params_of(s).with_omega(s.omega);
  GroundState q = solve_at(s, s.omega);
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unif(0.2, 2.0);

  double worst_kac = 0, worst_action = 0, worst_nehari = 0;
  for (int k = 0; k < s.trials; ++k) {
    RadialField w = perturbation_field(q.profile.grid, s.seed * 1000 + k);
    w.values *= unif(rng);
    FunctionalReport r = report(w, params);
    const double kac = kac_functional(w, params, 1.0, -2.0 / s.N);
    const double want = 2.0 / s.N * r.virial;
    worst_kac = std::max(
        worst_kac, std::abs(kac - want) / std::max({std::abs(kac), std::abs(want), 1e-30}));
    worst_action = std::max(worst_action,
                            std::abs(r.action - (r.energy + 0.5 * s.omega * r.mass)) /
                                std::max(std::abs(r.action), 1e-30));
    auto [lam, proj] = nehari_project(w, params);
    FunctionalReport rp = report(proj, params);
    const double coeff = (params.p - 1.0) / (2.0 * (params.p + 1.0));
    worst_nehari =
        std::max(worst_nehari, std::abs(rp.action - coeff * rp.potential) /
                                   std::max(std::abs(rp.action), 1e-30));
  }
  json checks = json::array();
  auto push = [&checks](const char* name, double value, double tol) {
    checks.push_back(
        {{"name", name}, {"max_residual", value}, {"tolerance", tol}, {"pass", value <= tol}});
  };
  push("kac_1_m2N_equals_2P_over_N", worst_kac, 1e-12);
  push("action_decomposition", worst_action, 1e-12);
  push("nehari_projected_action", worst_nehari, 1e-10);
  push("groundstate_pohozaev_max",
       *std::max_element(q.pohozaev.begin(), q.pohozaev.end()), 1e-6);
  FunctionalReport rq = q.functionals();
  push("groundstate_nehari", std::abs(rq.nehari) / std::max(rq.potential, 1e-30), 1e-8);
  json j{{"checks", checks}};
  bool all = true;
  for (const auto& c : checks) all = all && c.at("pass").get<bool>();
  j["all_pass"] = all;
  write_text((fs::path(s.out) / "identities.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "identities", {{"trials", s.trials}});
  std::cout << j.dump(2) << "\n";
  return all ? kExitOk : kExitSolver;
}

int cmd_d_omega_sweep(const Scenario& s) {
  GroundState q1 = solve_at(s, 1.0);
  ModelParams base = params_of(s);
  auto rows = run_parallel(static_cast<int>(s.omegas.size()), [&](int i) {
    const double w = s.omegas[i];
    auto [dn, dc] = action_level_d(base.with_omega(w), q1);
    return std::tuple<double, double, double>(w, dn, dc);
  });
  std::string csv = "omega,d_numeric,d_closed_form,rel_diff\n";
  bool ok = true;
  for (auto& [w, dn, dc] : rows) {
    const double rel = std::abs(dn - dc) / std::max(std::abs(dc), 1e-30);
    ok = ok && rel <= 1e-6 && dn > 0.0;
    csv += format_double(w) + "," + format_double(dn) + "," + format_double(dc) + "," +
           format_double(rel) + "\n";
  }
  write_text((fs::path(s.out) / "d_sweep.csv").string(), csv);
  write_scenario_echo(s, "d-omega-sweep", {{"omegas", s.omegas}});
  json j{{"rows", s.omegas.size()}, {"within_1e-6", ok}, {"sigma", action_level_sigma(base)}};
  std::cout << j.dump(2) << "\n";
  return ok ? kExitOk : kExitSolver;
}

int cmd_classify(const Scenario& s) {
  ModelParams params = params_of(s).with_omega(s.omega);
  if (s.input.empty()) throw std::domain_error("classify: --input field.csv required");
  RadialField u0 = read_field_csv(s.input, s.N);
  GroundState q1 = solve_at(s, 1.0);
  auto [dn, dc] = action_level_d(params, q1);
  Classification c = classify_initial_data(u0, params, dn);
  json j = classification_to_json(c);
  j["params"] = params_to_json(params);
  write_text((fs::path(s.out) / "classification.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "classify", {{"input", s.input}});
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

json trajectory_report(const ModelParams& params, const Trajectory& tr,
                       const Classification* cls) {
  double max_mass_drift = 0, max_energy_drift = 0, max_grad = 0, max_dist = 0;
  for (size_t k = 0; k < tr.samples(); ++k) {
    max_mass_drift =
        std::max(max_mass_drift, std::abs(tr.mass[k] - tr.mass[0]) / tr.mass[0]);
    max_energy_drift =
        std::max(max_energy_drift, std::abs(tr.energy[k] - tr.energy[0]) /
                                       std::max(std::abs(tr.energy[0]), 1.0));
    max_grad = std::max(max_grad, tr.grad_norm[k]);
    max_dist = std::max(max_dist, tr.dist_to_ref[k]);
  }
  json j{{"params", params_to_json(params)},
         {"status", to_string(tr.final_status)},
         {"samples", tr.samples()},
         {"t_end", tr.times.empty() ? 0.0 : tr.times.back()},
         {"max_mass_drift", max_mass_drift},
         {"max_energy_drift", max_energy_drift},
         {"max_grad_norm", max_grad},
         {"max_dist_to_ref", max_dist}};
  if (tr.blowup_time) j["blowup_time_lower_bound"] = *tr.blowup_time;
  if (cls) j["classification"] = classification_to_json(*cls);
  return j;
}

int check_expectation(const std::string& expect, const Trajectory& tr) {
  if (expect == "global" && tr.final_status != EvolutionStatus::Finished) {
    emit_error(kExitExpectation, "expectation",
               "scenario expected global existence but the run ended with " +
                   std::string(to_string(tr.final_status)));
    return kExitExpectation;
  }
  if (expect == "blowup" && tr.final_status == EvolutionStatus::Finished) {
    emit_error(kExitExpectation, "expectation",
               "scenario expected blow-up but the run reached final time");
    return kExitExpectation;
  }
  return kExitOk;
}

int cmd_evolve(const Scenario& s) {
  ModelParams params = params_of(s).with_omega(s.omega);
  RadialField u0;
  std::unique_ptr<RadialField> ref;
  if (!s.input.empty()) {
    u0 = read_field_csv(s.input, s.N);
  } else {
    GroundState q = solve_at(s, s.omega);
    u0 = q.profile;
    ref = std::make_unique<RadialField>(q.profile);
  }
  GroundState q1 = solve_at(s, 1.0);
  auto [dval, dclosed] = action_level_d(params, q1);
  (void)dclosed;
  Classification cls = classify_initial_data(u0, params, dval);
  Trajectory tr = evolve(u0, params, s.T, s.sample_dt, {}, ref.get());
  write_trajectory_csv(tr, (fs::path(s.out) / "trajectory.csv").string());
  json j = trajectory_report(params, tr, &cls);
  write_text((fs::path(s.out) / "report.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "evolve",
                      {{"T", s.T}, {"sample_dt", s.sample_dt}, {"expect", s.expect}});
  std::cout << j.dump(2) << "\n";
  return check_expectation(s.expect, tr);
}

int cmd_stability(const Scenario& s) {
  ModelParams params = params_of(s).with_omega(s.omega);
  if (classify_regime(params) != Regime::MassSubcritical) {
    emit_error(kExitValidation, "regime", "stability requires the mass-subcritical regime");
    return kExitValidation;
  }
  GroundState q = solve_at(s, s.omega);
  auto results = run_parallel(static_cast<int>(s.seeds.size()), [&](int i) {
    return stability_experiment(q, s.epsilon, s.T, s.seeds[i], s.sample_dt);
  });
  std::string csv = "seed,max_distance\n";
  double worst = 0;
  bool all_global = true;
  for (size_t i = 0; i < results.size(); ++i) {
    csv += std::to_string(s.seeds[i]) + "," + format_double(results[i].max_distance) + "\n";
    worst = std::max(worst, results[i].max_distance);
    all_global =
        all_global && results[i].trajectory.final_status == EvolutionStatus::Finished;
    write_trajectory_csv(
        results[i].trajectory,
        (fs::path(s.out) / ("trajectory_seed" + std::to_string(s.seeds[i]) + ".csv"))
            .string());
  }
  write_text((fs::path(s.out) / "stability.csv").string(), csv);
  json j{{"params", params_to_json(params)},
         {"epsilon", s.epsilon},
         {"T", s.T},
         {"max_distance", worst},
         {"margin_5eps", 5.0 * s.epsilon},
         {"within_margin", worst <= 5.0 * s.epsilon},
         {"all_global", all_global}};
  write_text((fs::path(s.out) / "report.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "stability", {{"epsilon", s.epsilon}, {"T", s.T}, {"seeds", s.seeds}});
  std::cout << j.dump(2) << "\n";
  if (!all_global) {
    emit_error(kExitExpectation, "expectation",
               "stability run expected global existence but a seed blew up");
    return kExitExpectation;
  }
  return kExitOk;
}

int cmd_instability(const Scenario& s) {
  ModelParams params = params_of(s).with_omega(s.omega);
  GroundState q = solve_at(s, s.omega);
  RadialField u0 = instability_family(q, s.lambda);
  Classification cls = classify_initial_data(u0, params, q.action_value);
  Trajectory tr = evolve(u0, params, s.T, s.sample_dt, {}, nullptr);
  write_trajectory_csv(tr, (fs::path(s.out) / "trajectory.csv").string());
  json j = trajectory_report(params, tr, &cls);
  j["lambda"] = s.lambda;
  write_text((fs::path(s.out) / "report.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "instability", {{"lambda", s.lambda}, {"T", s.T}});
  std::cout << j.dump(2) << "\n";
  if (tr.final_status == EvolutionStatus::Finished) {
    emit_error(kExitExpectation, "expectation",
               "instability run expected blow-up but reached final time");
    return kExitExpectation;
  }
  return kExitOk;
}

int cmd_mass_critical(const Scenario& s) {
  ModelParams params = params_of(s).with_omega(s.omega);
  if (!is_mass_critical(params)) {
    emit_error(kExitValidation, "regime", "mass-critical experiment requires p = p_c");
    return kExitValidation;
  }
  GroundState q = solve_at(s, s.omega);
  FunctionalReport rq = q.functionals();
  json rows = json::array();
  bool ok = true;
  for (double lam : s.lambdas) {
    RadialField fn = mass_critical_family(q, lam);
    FunctionalReport r = report(fn, params);
    const double N = s.N, b = params.b, p = params.p;
    const double mass_ratio = std::pow(lam, 2.0);
    const double kin_ratio = std::pow(lam, 4.0);
    const double pot_ratio = std::pow(lam, (N + 2.0) * (p + 1.0) / 2.0 - b - N);
    const double e_formula = std::pow(lam, 4.0) / (p + 1.0) *
                             (1.0 - std::pow(lam, (4.0 + 2.0 * b) / N)) * rq.potential;
    auto rel = [](double x, double y) {
      return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-30});
    };
    const double r1 = rel(r.mass, mass_ratio * rq.mass);
    const double r2 = rel(r.kinetic, kin_ratio * rq.kinetic);
    const double r3 = rel(r.potential, pot_ratio * rq.potential);
    const double r4 = rel(r.energy, e_formula);
    const bool neg = lam > 1.0 ? r.energy < 0.0 : true;
    ok = ok && r1 <= 1e-10 && r2 <= 1e-10 && r3 <= 1e-10 && r4 <= 1e-10 && neg;
    rows.push_back({{"lambda", lam},
                    {"mass_ratio_residual", r1},
                    {"kinetic_ratio_residual", r2},
                    {"potential_ratio_residual", r3},
                    {"energy_formula_residual", r4},
                    {"energy", r.energy},
                    {"energy_negative", neg}});
  }
  json j{{"params", params_to_json(params)}, {"rows", rows}, {"all_pass", ok}};
  write_text((fs::path(s.out) / "mass_critical.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "mass-critical", {{"lambdas", s.lambdas}});
  std::cout << j.dump(2) << "\n";
  return ok ? kExitOk : kExitSolver;
}

int cmd_normalized(const Scenario& s) {
  ModelParams params = params_of(s);
  params.omega.reset();
  GroundState q1 = solve_at(s, 1.0);
  const double mass1 = report(q1.profile, q1.params).mass;
  const double c = s.c_mass > 0.0 ? s.c_mass : s.c_factor * mass1;
  NormalizedSolution sol = scaled_normalized_solution(c, params, q1);
  json j{{"params", params_to_json(params)},
         {"c", c},
         {"omega_c", sol.omega_c},
         {"energy", sol.energy_value},
         {"lagrange_residual", sol.lagrange_residual},
         {"mass", report(sol.profile, params.with_omega(sol.omega_c)).mass}};
  if (s.minimize) {
    if (classify_regime(params) != Regime::MassSubcritical) {
      emit_error(kExitValidation, "regime",
                 "minimization requires the mass-subcritical regime");
      return kExitValidation;
    }
    NormalizedSolution min = minimize_mass_constrained(c, params, sol.profile);
    j["minimized"] = {{"energy", min.energy_value},
                      {"omega_c", min.omega_c},
                      {"iterations", min.iterations},
                      {"lagrange_residual", min.lagrange_residual},
                      {"cross_check_rel", std::abs(min.energy_value - sol.energy_value) /
                                              std::max(std::abs(sol.energy_value), 1e-30)}};
    write_field_csv(min.profile, (fs::path(s.out) / "minimizer.csv").string());
  }
  write_field_csv(sol.profile, (fs::path(s.out) / "profile.csv").string());
  write_text((fs::path(s.out) / "normalized.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "normalized", {{"c", c}, {"minimize", s.minimize}});
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_mc_sweep(const Scenario& s) {
  ModelParams params = params_of(s);
  params.omega.reset();
  if (classify_regime(params) != Regime::MassSubcritical) {
    emit_error(kExitValidation, "regime", "m(c) sweep requires the mass-subcritical regime");
    return kExitValidation;
  }
  GroundState q1 = solve_at(s, 1.0);
  const double mass1 = report(q1.profile, q1.params).mass;
  std::vector<double> cs(s.c_count);
  const double ratio =
      std::pow(s.c_max_factor / s.c_min_factor, 1.0 / std::max(1, s.c_count - 1));
  for (int i = 0; i < s.c_count; ++i) cs[i] = mass1 * s.c_min_factor * std::pow(ratio, i);

  auto rows = run_parallel(s.c_count, [&](int i) {
    NormalizedSolution init = scaled_normalized_solution(cs[i], params, q1);
    return minimize_mass_constrained(cs[i], params, init.profile);
  });
  std::string csv = "c,m_c,omega_c,iterations,residual\n";
  bool decreasing = true, strict = true, negative = true;
  for (int i = 0; i < s.c_count; ++i) {
    csv += format_double(cs[i]) + "," + format_double(rows[i].energy_value) + "," +
           format_double(rows[i].omega_c) + "," + std::to_string(rows[i].iterations) + "," +
           format_double(rows[i].lagrange_residual) + "\n";
    negative = negative && rows[i].energy_value < 0.0;
    if (i > 0) {
      decreasing = decreasing && rows[i].energy_value < rows[i - 1].energy_value;
      strict =
          strict && rows[i].energy_value < (cs[i] / cs[i - 1]) * rows[i - 1].energy_value;
    }
  }
  write_text((fs::path(s.out) / "mc_sweep.csv").string(), csv);
  json j{{"params", params_to_json(params)},
         {"c_values", cs},
         {"all_negative", negative},
         {"strictly_decreasing", decreasing},
         {"superlinear_decrease", strict}};
  write_text((fs::path(s.out) / "mc_sweep.json").string(), j.dump(2) + "\n");
  write_scenario_echo(s, "m-c-sweep",
                      {{"c_min_factor", s.c_min_factor},
                       {"c_max_factor", s.c_max_factor},
                       {"c_count", s.c_count}});
  std::cout << j.dump(2) << "\n";
  return (negative && decreasing && strict) ? kExitOk : kExitSolver;
}

void apply_config(Scenario& s, const std::string& path) {
  json j = json::parse(read_text(path));
  if (j.contains("name")) s.name = j["name"];
  if (j.contains("out")) s.out = j["out"];
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("params")) {
    const json& p = j["params"];
    if (p.contains("N")) s.N = p["N"].get<int>();
    auto str_of = [](const json& v) {
      return v.is_string() ? v.get<std::string>() : json(v).dump();
    };
    if (p.contains("b")) s.b = str_of(p["b"]);
    if (p.contains("p")) s.p = str_of(p["p"]);
    if (p.contains("omega")) {
      s.omega = p["omega"].get<double>();
      s.has_omega = true;
    }
  }
  if (j.contains("grid")) {
    if (j["grid"].contains("R")) s.R = j["grid"]["R"].get<double>();
    if (j["grid"].contains("M")) s.M = j["grid"]["M"].get<int>();
  }
  const json k = j.contains("settings") ? j["settings"] : json::object();
  if (k.contains("T")) s.T = k["T"].get<double>();
  if (k.contains("sample_dt")) s.sample_dt = k["sample_dt"].get<double>();
  if (k.contains("epsilon")) s.epsilon = k["epsilon"].get<double>();
  if (k.contains("lambda")) s.lambda = k["lambda"].get<double>();
  if (k.contains("c_mass")) s.c_mass = k["c_mass"].get<double>();
  if (k.contains("c_factor")) s.c_factor = k["c_factor"].get<double>();
  if (k.contains("c_min_factor")) s.c_min_factor = k["c_min_factor"].get<double>();
  if (k.contains("c_max_factor")) s.c_max_factor = k["c_max_factor"].get<double>();
  if (k.contains("c_count")) s.c_count = k["c_count"].get<int>();
  if (k.contains("omegas")) s.omegas = k["omegas"].get<std::vector<double>>();
  if (k.contains("lambdas")) s.lambdas = k["lambdas"].get<std::vector<double>>();
  if (k.contains("seeds")) s.seeds = k["seeds"].get<std::vector<std::uint64_t>>();
  if (k.contains("trials")) s.trials = k["trials"].get<int>();
  if (k.contains("minimize")) s.minimize = k["minimize"].get<bool>();
  if (k.contains("input")) s.input = k["input"].get<std::string>();
  if (k.contains("expect")) s.expect = k["expect"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  Scenario s;
  // config first, flags override
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string_view(argv[i]) == "--config") {
      try {
        apply_config(s, argv[i + 1]);
      } catch (const std::exception& e) {
        emit_error(kExitValidation, "config", e.what());
        return kExitValidation;
      }
    }

  CLI::App app{"radial standing-wave laboratory for the weighted focusing NLS"};
  app.require_subcommand(1);
  std::string config_unused;

  std::map<std::string, std::function<int(const Scenario&)>> handlers;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--name", s.name);
    c->add_option("--N", s.N, "dimension (2..12)");
    c->add_option("--b", s.b, "weight exponent (decimal or fraction)");
    c->add_option("--p", s.p, "nonlinearity exponent (decimal or fraction)");
    c->add_option("--omega", s.omega, "frequency");
    c->add_option("--R", s.R, "truncation radius (0 = auto)");
    c->add_option("--M", s.M, "grid nodes");
    c->add_option("--out", s.out, "output directory");
    c->add_option("--seed", s.seed);
    c->add_option("--config", config_unused, "scenario JSON (flags override)");
  };
  auto sub = [&](const char* name, const char* desc,
                 std::function<int(const Scenario&)> fn) {
    CLI::App* c = app.add_subcommand(name, desc);
    add_common(c);
    handlers[name] = std::move(fn);
    return c;
  };

  sub("ground-state", "solve the positive radial profile and its diagnostics",
      cmd_ground_state);
  sub("identities", "verify the functional identities on random fields", cmd_identities)
      ->add_option("--trials", s.trials);
  sub("d-omega-sweep", "action level d(omega) vs its closed form", cmd_d_omega_sweep)
      ->add_option("--omegas", s.omegas)
      ->delimiter(',');
  sub("classify", "potential-well classification of a field snapshot", cmd_classify)
      ->add_option("--input", s.input, "field CSV (r,re,im)");
  {
    auto* c = sub("evolve", "Crank-Nicolson evolution with monitors", cmd_evolve);
    c->add_option("--input", s.input, "initial field CSV (default: ground state)");
    c->add_option("--T", s.T);
    c->add_option("--sample-dt", s.sample_dt);
    c->add_option("--expect", s.expect)->check(CLI::IsMember({"none", "global", "blowup"}));
  }
  {
    auto* c = sub("stability", "seeded perturbation experiment around the ground state",
                  cmd_stability);
    c->add_option("--epsilon", s.epsilon);
    c->add_option("--T", s.T);
    c->add_option("--sample-dt", s.sample_dt);
    c->add_option("--seeds", s.seeds)->delimiter(',');
  }
  {
    auto* c = sub("instability", "dilated ground state driven to blow-up", cmd_instability);
    c->add_option("--lambda", s.lambda);
    c->add_option("--T", s.T);
    c->add_option("--sample-dt", s.sample_dt);
  }
  sub("mass-critical", "scaling family checks at p = p_c", cmd_mass_critical)
      ->add_option("--lambdas", s.lambdas)
      ->delimiter(',');
  {
    auto* c = sub("normalized", "prescribed-mass standing wave via scaling", cmd_normalized);
    c->add_option("--c-mass", s.c_mass, "target mass (absolute)");
    c->add_option("--c-factor", s.c_factor, "target mass as multiple of ||Q_1||^2");
    c->add_flag("--minimize", s.minimize, "cross-check with constrained descent");
  }
  {
    auto* c = sub("m-c-sweep", "constrained minimization over a geometric mass ladder",
                  cmd_mc_sweep);
    c->add_option("--c-min-factor", s.c_min_factor);
    c->add_option("--c-max-factor", s.c_max_factor);
    c->add_option("--c-count", s.c_count);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    fs::create_directories(s.out);
    for (auto& [name, fn] : handlers)
      if (app.get_subcommand(name)->parsed()) return fn(s);
    emit_error(kExitValidation, "usage", "no subcommand given");
    return kExitValidation;
  } catch (const std::domain_error& e) {
    emit_error(kExitValidation, "validation", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    emit_error(kExitValidation, "validation", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    emit_error(kExitSolver, "solver", e.what());
    return kExitSolver;
  }
}
