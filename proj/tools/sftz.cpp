#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "sftz/config.hpp"
#include "sftz/decay.hpp"
#include "sftz/orbits.hpp"
#include "sftz/zeta.hpp"

using namespace sftz;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.3.0";

/// Artifacts are collected in memory and written only after the run succeeds.
struct Run {
  RunConfig cfg;
  int depth = 0;
  std::map<std::string, std::string> files;
  std::string summary;

  void json(const std::string& name, const Json& j) { files[name] = j.dump(2) + "\n"; }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

cplx complex_param(const RunConfig& cfg, const std::string& key, cplx fallback) {
  if (!cfg.has(key)) return fallback;
  const auto v = cfg.get_doubles(key, {});
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return {v[0], v[1]};
  fail(ErrorCode::config_invalid, "$.params." + key + ": expected a number or [re, im]");
}

Json cjson(cplx v) { return Json::array({v.real(), v.imag()}); }

Potential f_u_or_normalized(const Run& r, double P) {
  if (r.cfg.f_u) return *r.cfg.f_u;
  return normalize(r.cfg.f, r.cfg.tau, P, r.depth).f0;
}

void cmd_pressure(Run& r) {
  const auto data = rpf(r.cfg.f, r.depth);
  const double p = data.log_lambda();
  r.json("pressure.json", {{"pressure", p}, {"depth", data.depth()}, {"exact", data.exact}});
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", p);
  r.summary = buf;
}

void cmd_rpf(Run& r) {
  const auto d = rpf(r.cfg.f, r.depth);
  r.json("rpf.json", {{"lambda", d.lambda}, {"log_lambda", d.log_lambda()}, {"depth", d.depth()},
                      {"residual", d.residual}, {"iterations", d.iterations},
                      {"invariance_residual", d.invariance_residual}, {"exact", d.exact}});
  std::string csv = "word,h,nu,gibbs\n";
  const int k = r.cfg.spec.k();
  for (std::size_t i = 0; i < d.h.size(); ++i)
    csv += d.space->word(i).to_string(k) + "," + num(d.h[i]) + "," + num(d.nu[i]) + "," +
           num(d.gibbs[i]) + "\n";
  r.files["rpf.csv"] = csv;
  r.summary = num(d.lambda);
}

void cmd_solve_pf(Run& r) {
  const auto s = solve_Pf_detailed(r.cfg.f, r.cfg.tau, r.depth);
  r.json("pf.json", {{"P_f", s.P}, {"residual", s.residual}, {"iterations", s.iterations},
                     {"bracket", {s.bracket_lo, s.bracket_hi}}});
  r.summary = num(s.P);
}

void cmd_solve_sz(Run& r) {
  const cplx z = complex_param(r.cfg, "z", 0.0);
  const auto s = solve_s_of_z(r.cfg.f, r.cfg.tau, r.cfg.g, z, r.depth);
  r.json("sz.json", {{"z", cjson(z)}, {"s", cjson(s.s)}, {"eigenvalue", cjson(s.eigenvalue)},
                     {"separation", s.separation}, {"steps", s.steps}});
  r.summary = num(s.s.real()) + " " + num(s.s.imag());
}

void cmd_zn(Run& r) {
  const int n_max = r.cfg.get_int("n_max", 10);
  ComplexParams p{complex_param(r.cfg, "s", 0.0), complex_param(r.cfg, "z", 0.0), 0.0};
  const auto t = compute_Zn(r.cfg.f, r.cfg.tau, r.cfg.g, p, n_max);
  std::string csv = "n,re,im\n";
  for (int n = 1; n <= n_max; ++n)
    csv += std::to_string(n) + "," + num(t.values[n - 1].real()) + "," + num(t.values[n - 1].imag()) + "\n";
  r.files["zn.csv"] = csv;
  r.summary = csv;
  r.summary.pop_back();
}

void cmd_zeta(Run& r) {
  const cplx s = complex_param(r.cfg, "s", 1.0), z = complex_param(r.cfg, "z", 0.0);
  const int N = r.cfg.get_int("N", 40);
  const auto zp = zeta_partial(r.cfg.f, r.cfg.tau, r.cfg.g, s, z, N);
  Json j = {{"s", cjson(s)}, {"z", cjson(z)}, {"N", N}, {"value", cjson(zp.value)},
            {"log_value", cjson(zp.log_value)}, {"convergent", zp.convergent},
            {"real_pressure", zp.real_pressure}};
  j["tail_estimate"] = std::isfinite(zp.tail_estimate) ? Json(zp.tail_estimate) : Json(nullptr);
  r.json("zeta.json", j);
  r.summary = num(zp.value.real()) + " " + num(zp.value.imag()) + (zp.convergent ? "" : " (divergent)");
}

void cmd_ruelle(Run& r) {
  RuelleBoundOptions opt;
  opt.n_max = r.cfg.get_int("n_max", opt.n_max);
  opt.eps = r.cfg.get_double("eps", opt.eps);
  opt.nu = r.cfg.get_double("nu", opt.nu);
  opt.theta = r.cfg.get_double("theta", opt.theta);
  opt.norm_depth = r.cfg.get_int("norm_depth", opt.norm_depth);
  opt.seed = r.cfg.seed;
  const double P = solve_Pf(r.cfg.f, r.cfg.tau);
  std::vector<ComplexParams> grid;
  for (double a : r.cfg.get_doubles("a", {0.0}))
    for (double b : r.cfg.get_doubles("b", {0.0}))
      for (double c : r.cfg.get_doubles("c", {0.0}))
        for (double w : r.cfg.get_doubles("w", {0.0})) grid.push_back(ComplexParams::from_parts(P, a, b, c, w));
  const auto sum = ruelle_bound_check(r.cfg.f, r.cfg.tau, r.cfg.g, grid, opt);
  Json reports = Json::array();
  std::string csv = "a,b,c,w,n,lhs,structural,passed\n";
  for (const auto& rep : sum.reports) {
    Json terms = Json::array();
    for (const auto& t : rep.rhs_terms)
      terms.push_back({{"m", t.m}, {"operator_norm", t.operator_norm},
                       {"operator_norm_upper", t.operator_norm_upper}, {"term", t.term}});
    reports.push_back({{"a", rep.params.a()}, {"b", rep.params.b()}, {"c", rep.params.c()},
                       {"w", rep.params.w()}, {"n", rep.n}, {"lhs", rep.lhs},
                       {"structural", rep.structural}, {"rhs_terms", terms},
                       {"fitted_C_eps", rep.fitted_C_eps}, {"passed", rep.passed}, {"note", rep.note}});
    csv += num(rep.params.a()) + "," + num(rep.params.b()) + "," + num(rep.params.c()) + "," +
           num(rep.params.w()) + "," + std::to_string(rep.n) + "," + num(rep.lhs) + "," +
           num(rep.structural) + "," + (rep.passed ? "1" : "0") + "\n";
  }
  r.json("ruelle.json", {{"C_eps", sum.C_eps}, {"C_least_squares", sum.C_least_squares},
                         {"max_inflation", sum.max_inflation}, {"all_passed", sum.all_passed},
                         {"holdout_certified", sum.holdout_certified}, {"reports", reports}});
  r.files["ruelle.csv"] = csv;
  r.summary = std::string(sum.all_passed ? "passed" : "failed") + " C_eps=" + num(sum.C_eps);
}

void cmd_eta(Run& r) {
  const cplx s = complex_param(r.cfg, "s", 1.0);
  const double delta = r.cfg.get_double("delta", 0.05);
  const int nodes = r.cfg.get_int("nodes", 128);
  const int N = r.cfg.get_int("N", 40);
  const auto e = eta_g(LogZeta(r.cfg.f, r.cfg.tau, r.cfg.g, N, r.depth), s, delta, nodes);
  r.json("eta.json", {{"s", cjson(s)}, {"delta", delta}, {"nodes", e.nodes}, {"value", cjson(e.value)},
                      {"richardson_diff", e.richardson_diff}, {"continued", e.continued}});
  r.summary = num(e.value.real()) + " " + num(e.value.imag());
}

void cmd_residue(Run& r) {
  ResidueOptions o;
  o.radius = r.cfg.get_double("radius", o.radius);
  o.s_nodes = r.cfg.get_int("s_nodes", o.s_nodes);
  o.delta = r.cfg.get_double("delta", o.delta);
  o.xi_nodes = r.cfg.get_int("xi_nodes", o.xi_nodes);
  o.N = r.cfg.get_int("N", o.N);
  o.depth = r.depth;
  const auto rep = residue_check(r.cfg.f, r.cfg.tau, r.cfg.g, o);
  r.json("residue.json", {{"P_f", rep.P_f}, {"residue", cjson(rep.residue)}, {"target", rep.target},
                          {"relative_error", rep.relative_error}, {"second_moment", rep.second_moment}});
  r.summary = num(rep.residue.real()) + " vs " + num(rep.target);
}

OrbitCatalog catalog_for(const Run& r, double T) {
  const double P = solve_Pf(r.cfg.f, r.cfg.tau);
  return build_catalog(r.cfg.tau, r.cfg.f, r.cfg.g, f_u_or_normalized(r, P), T);
}

void cmd_orbits(Run& r) {
  const auto Ts = r.cfg.get_doubles("T", {10.0});
  const auto cat = catalog_for(r, *std::max_element(Ts.begin(), Ts.end()));
  std::ostringstream out;
  write_catalog_csv(out, cat, r.cfg.spec.k());
  r.files["orbits.csv"] = out.str();
  r.summary = std::to_string(cat.records.size()) + " orbits";
}

void cmd_pi_f(Run& r) {
  const auto Ts = r.cfg.get_doubles("T", {10.0});
  const double T_max = *std::max_element(Ts.begin(), Ts.end());
  const auto cat = catalog_for(r, T_max);
  const double P = solve_Pf(r.cfg.f, r.cfg.tau);
  std::string csv = "T,value,li,ratio,orbits\n";
  for (double T : Ts) {
    const auto p = pi_F(cat, P, T);
    csv += num(T) + "," + num(p.value) + "," + num(p.li_target) + "," + num(p.ratio) + "," +
           std::to_string(p.orbits) + "\n";
    r.summary = "ratio " + num(p.ratio) + " at T = " + num(T);
  }
  r.files["pi_f.csv"] = csv;
}

WindowSchedule schedule_kind(const std::string& name) {
  if (name == "constant") return WindowSchedule::constant;
  if (name == "inverse_sqrt") return WindowSchedule::inverse_sqrt;
  if (name == "inverse") return WindowSchedule::inverse;
  if (name == "exponential") return WindowSchedule::exponential;
  fail(ErrorCode::config_invalid, "$.params.schedule: unknown schedule '" + name + "'");
}

void cmd_hannay_ozorio(Run& r) {
  const auto Ts = r.cfg.get_doubles("T", {10.0});
  const DeltaSchedule sched{schedule_kind(r.cfg.get_string("schedule", "inverse_sqrt")),
                            r.cfg.get_double("scale", 4.0), r.cfg.get_double("rate", 0.1)};
  double reach = 0;
  for (double T : Ts) reach = std::max(reach, T + sched(T) / 2);
  const auto cat = catalog_for(r, reach);
  const double target = hannay_ozorio_target(r.cfg.f, r.cfg.tau, r.cfg.g);
  std::string csv = "T,delta,value,target,error,orbits\n";
  for (double T : Ts) {
    const auto w = hannay_ozorio_window(cat, T, sched(T), target);
    csv += num(T) + "," + num(sched(T)) + "," + num(w.value) + "," + num(w.target) + "," +
           num(w.error) + "," + std::to_string(w.orbits) + "\n";
    r.summary = "error " + num(w.error) + " at T = " + num(T);
  }
  r.files["hannay_ozorio.csv"] = csv;
  if (sched.out_of_reach()) r.summary += " (exponential windows are out of statistical reach)";
}

RegimeKind regime_kind(const std::string& name) {
  if (name == "b_leading") return RegimeKind::b_leading;
  if (name == "w_leading") return RegimeKind::w_leading;
  if (name == "lattice_control") return RegimeKind::lattice_control;
  fail(ErrorCode::config_invalid, "$.params.regime: unknown regime '" + name + "'");
}

void cmd_decay(Run& r) {
  DecayOptions o;
  o.depth = r.depth > 0 ? r.depth : r.cfg.get_int("depth", o.depth);
  o.m_max = r.cfg.get_int("m_max", o.m_max);
  o.theta = r.cfg.get_double("theta", o.theta);
  o.verify_depth = r.cfg.get_int("verify_depth", o.verify_depth);
  o.random_functions = r.cfg.get_int("random_functions", o.random_functions);
  o.seed = r.cfg.seed;
  const auto kind = regime_kind(r.cfg.get_string("regime", "b_leading"));
  DecayFit fit = [&] {
    if (kind == RegimeKind::w_leading && r.cfg.has("mu_hat"))
      return w_leading_sweep(r.cfg.f, r.cfg.tau, r.cfg.g, r.cfg.get_double("B", 1.0),
                               r.cfg.get_doubles("w", {10.0}), r.cfg.get_double("b", 0.0),
                               r.cfg.get_double("mu_hat", 0.5), o);
    RegimeSpec spec{kind, r.cfg.get_double("B", 1.0), r.cfg.get_double("nu", 1.0),
                    r.cfg.get_double("threshold", 1.0), {}};
    for (double a : r.cfg.get_doubles("a", {0.0}))
      for (double b : r.cfg.get_doubles("b", {0.0}))
        for (double c : r.cfg.get_doubles("c", {0.0}))
          for (double w : r.cfg.get_doubles("w", {0.0})) spec.grid.push_back({a, b, c, w});
    return measure_decay(r.cfg.f, r.cfg.tau, r.cfg.g, spec, o);
  }();
  std::string csv = "a,b,c,w,m,norm\n";
  Json pts = Json::array();
  for (const auto& p : fit.points) {
    const auto& g = p.point;
    for (std::size_t m = 0; m < p.norms.size(); ++m)
      csv += num(g.a) + "," + num(g.b) + "," + num(g.c) + "," + num(g.w) + "," +
             std::to_string(m + 1) + "," + num(p.norms[m]) + "\n";
    pts.push_back({{"a", g.a}, {"b", g.b}, {"c", g.c}, {"w", g.w}, {"rho", p.rho}, {"C", p.C},
                   {"residual", p.residual},
                   {"dense_radius", std::isfinite(p.dense_radius) ? Json(p.dense_radius) : Json(nullptr)}});
  }
  r.files["decay.csv"] = csv;
  r.json("decay.json", {{"C", fit.C}, {"rho", fit.rho_sup}, {"eps", fit.eps}, {"residual", fit.residual},
                        {"points", pts}});
  r.summary = "rho " + num(fit.rho_sup);
}

void cmd_ly(Run& r) {
  LYOptions o;
  o.depth = r.depth > 0 ? r.depth : r.cfg.get_int("depth", o.depth);
  o.m_max = r.cfg.get_int("m_max", o.m_max);
  o.a = r.cfg.get_double("a", o.a);
  o.c = r.cfg.get_double("c", o.c);
  o.E = r.cfg.get_double("E", o.E);
  o.theta = r.cfg.get_double("theta", o.theta);
  o.gamma_hat = r.cfg.get_double("gamma_hat", o.gamma_hat);
  o.seed = r.cfg.seed;
  const auto rep = lasota_yorke_check(r.cfg.f, r.cfg.tau, r.cfg.g, o);
  std::string csv = "m,S,S_constant,A0_min\n";
  for (const auto& row : rep.rows)
    csv += std::to_string(row.m) + "," + num(row.S) + "," + num(row.S_constant) + "," + num(row.A0_min) + "\n";
  r.files["ly.csv"] = csv;
  r.json("ly.json", {{"depth", rep.depth}, {"E", rep.E}, {"gamma_hat", rep.gamma_hat}, {"t", rep.t},
                     {"A0", rep.A0}, {"e_slope", rep.e_slope}, {"e_points", rep.e_points}});
  r.summary = "A0 " + num(rep.A0);
}

void cmd_lattice(Run& r) {
  const auto rep = lattice_test(r.cfg.f, r.cfg.tau, r.cfg.get_int("n_max", 8));
  r.json("lattice.json", {{"lattice", rep.lattice}, {"generator", rep.generator}, {"modulus", rep.modulus}});
  r.summary = rep.lattice ? "lattice, generator " + num(rep.generator) : "non-lattice";
}

const std::map<std::string, std::function<void(Run&)>>& commands() {
  static const std::map<std::string, std::function<void(Run&)>> table = {
      {"pressure", cmd_pressure},   {"rpf", cmd_rpf},           {"solve-pf", cmd_solve_pf},
      {"solve-sz", cmd_solve_sz},   {"zn", cmd_zn},             {"zeta", cmd_zeta},
      {"ruelle-check", cmd_ruelle}, {"eta-g", cmd_eta},         {"residue", cmd_residue},
      {"orbits", cmd_orbits},       {"pi-f", cmd_pi_f},         {"hannay-ozorio", cmd_hannay_ozorio},
      {"decay", cmd_decay},         {"ly-check", cmd_ly},       {"lattice-test", cmd_lattice},
  };
  return table;
}

struct Manifest {
  std::string subcommand;
  Json config;
  std::optional<std::uint64_t> seed;
  int depth = 0;
  int threads = 1;
};

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_invalid, path + ": cannot open manifest");
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp), value = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "subcommand") m.subcommand = value;
    else if (key == "seed") m.seed = std::stoull(value);
    else if (key == "depth") m.depth = std::stoi(value);
    else if (key == "threads") m.threads = std::stoi(value);
    else if (key == "config") {
      try {
        m.config = Json::parse(value);
      } catch (const Json::parse_error& e) {
        fail(ErrorCode::config_invalid, path + ": config line: " + e.what());
      }
    }
  }
  if (m.subcommand.empty() || m.config.is_null())
    fail(ErrorCode::config_invalid, path + ": manifest lacks subcommand or config");
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer operators, zeta functions and orbit statistics on subshifts of finite type"};
  app.set_version_flag("--version", kVersion);
  std::string config_path, out_dir = ".", manifest_path;
  std::optional<std::uint64_t> seed;
  int threads = 1, depth = 0;
  app.add_option("--config", config_path, "Experiment file (JSON)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--depth", depth, "Override the matrix depth")->check(CLI::NonNegativeNumber);
  app.add_option("--manifest", manifest_path, "Re-run from a manifest written by an earlier run");
  app.require_subcommand(0, 1);
  for (const auto& [name, fn] : commands()) app.add_subcommand(name)->fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    std::string sub;
    Json doc;
    if (!manifest_path.empty()) {
      const auto m = read_manifest(manifest_path);
      sub = m.subcommand;
      doc = m.config;
      if (!seed) seed = m.seed;
      if (depth == 0) depth = m.depth;
    } else {
      if (app.get_subcommands().empty()) {
        std::cerr << "a subcommand is required\n" << app.help();
        return static_cast<int>(ErrorCode::invalid_argument);
      }
      if (config_path.empty()) fail(ErrorCode::config_invalid, "--config is required");
      sub = app.get_subcommands().front()->get_name();
      std::ifstream in(config_path);
      if (!in) fail(ErrorCode::config_invalid, config_path + ": cannot open");
      try {
        doc = Json::parse(in);
      } catch (const Json::parse_error& e) {
        fail(ErrorCode::config_invalid, config_path + ": " + e.what());
      }
    }
    const auto it = commands().find(sub);
    if (it == commands().end()) fail(ErrorCode::config_invalid, "unknown subcommand '" + sub + "'");

    const auto t0 = std::chrono::steady_clock::now();
    Run run{parse_config(doc), depth, {}, {}};
    if (seed) run.cfg.seed = *seed;
    it->second(run);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(out_dir);
    for (const auto& [name, content] : run.files) {
      std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
      f << content;
    }
    const std::string compact = doc.dump();
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(compact)));
    std::ofstream mf(fs::path(out_dir) / "manifest.txt", std::ios::binary);
    mf << "sftz " << kVersion << "\n"
       << "subcommand " << sub << "\n"
       << "config_hash fnv1a:" << hash << "\n"
       << "seed " << run.cfg.seed << "\n"
       << "depth " << depth << "\n"
       << "threads " << threads << "\n"
       << "eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION << "\n"
       << "wall_seconds " << wall << "\n"
       << "config " << compact << "\n";
    std::cout << run.summary << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
