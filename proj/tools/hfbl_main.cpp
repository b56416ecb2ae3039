// Command-line front end: solve, sweep, gamma-star, phase, verify, asymptote.
// Exit codes: 0 success, 1 internal error, 2 usage error, 3 regime
// nonexistence (a correct "no" answer).

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hfbl/asymptotics.hpp"
#include "hfbl/ode.hpp"
#include "hfbl/oracles.hpp"
#include "hfbl/phase.hpp"
#include "hfbl/serialize.hpp"
#include "hfbl/shooting.hpp"
#include "hfbl/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoSolution = 3;

struct NoSolution {
  std::string rule;
};

struct CommonArgs {
  double m = 0.0;
  double gamma = 0.0;
  std::optional<double> alpha;
  bool shoot_bounded = false;
  double t_max = 50.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::string format = "json";
  std::string out;
};

void write_artifact(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output path: " + path);
  f.write(bytes.data(), static_cast<std::streamoff>(bytes.size()));
}

int worker_count() {
  if (const char* env = std::getenv("HFBL_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

// Hard nonexistence rules that need no integration.
void reject_known_empty_regimes(double m, double gamma) {
  if (m == -2.0) throw NoSolution{"no solutions exist at m = -2 for any gamma"};
  if (m < -2.0) {
    const double bound = std::cbrt(2.0 / ((m + 2.0) * (m + 2.0)));
    if (gamma <= bound)
      throw NoSolution{"for m < -2 solutions require gamma > (2/(m+2)^2)^(1/3) = " +
                       hfbl::fmt17(bound)};
  }
  if (m > -2.0 && m <= -1.0 && gamma >= 0.0)
    throw NoSolution{"for -2 < m <= -1 solutions require gamma < 0"};
}

hfbl::ShootOptions shoot_options(const CommonArgs& a) {
  hfbl::ShootOptions o;
  o.t_max = a.t_max;
  o.rel_tol = a.rel_tol;
  o.abs_tol = a.abs_tol;
  return o;
}

hfbl::RunMeta base_meta(const std::string& cmd, const CommonArgs& a) {
  hfbl::RunMeta meta;
  meta.set("command", cmd);
  meta.set("m", a.m);
  meta.set("gamma", a.gamma);
  if (a.alpha) meta.set("alpha", *a.alpha);
  meta.set("shoot_bounded", a.shoot_bounded ? "true" : "false");
  meta.set("t_max", a.t_max);
  meta.set("rel_tol", a.rel_tol);
  meta.set("abs_tol", a.abs_tol);
  return meta;
}

std::vector<hfbl::SolutionReport> bounded_reports(const CommonArgs& a) {
  using namespace hfbl;
  const Params p{a.m, a.gamma};
  const ShootOptions opts = shoot_options(a);
  std::vector<SolutionReport> reps;

  if (a.m > -1.0) {
    const ShootResult res = shoot_concave(p, opts);
    if (res.status == ShootStatus::no_sign_change)
      throw std::runtime_error("shooting bracket failed");
    reps.push_back(res.report);
    return reps;
  }

  const AlphaInterval iv = alpha_interval(p, opts);
  if (iv.kind == IntervalKind::empty)
    throw NoSolution{"gamma lies on the nonexistence side of gamma*"};
  reps.push_back(make_report(solve_ivp(p, iv.lo, opts), opts));
  if (!iv.hi_unbounded && iv.kind == IntervalKind::interval)
    reps.push_back(make_report(solve_ivp(p, iv.hi, opts), opts));
  return reps;
}

int cmd_solve(const CommonArgs& a, const std::string& traj_out) {
  using namespace hfbl;
  RunMeta meta = base_meta("solve", a);

  std::vector<SolutionReport> reps;
  if (a.alpha) {
    const Trajectory traj = solve_ivp(Params{a.m, a.gamma}, *a.alpha, shoot_options(a));
    reps.push_back(make_report(traj, shoot_options(a)));
    if (!traj_out.empty()) write_artifact(traj_out, trajectory_csv(traj, meta));
  } else {
    reject_known_empty_regimes(a.m, a.gamma);
    reps = bounded_reports(a);
    if (!traj_out.empty()) {
      const Trajectory traj =
          solve_ivp(Params{a.m, a.gamma}, reps.front().alpha, shoot_options(a));
      write_artifact(traj_out, trajectory_csv(traj, meta));
    }
  }

  if (a.format == "csv") {
    std::string out = sweep_csv_header(meta);
    for (const auto& r : reps) out += sweep_csv_row(r);
    write_artifact(a.out, out);
  } else {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reps) j["reports"].push_back(report_json(r, meta));
    write_artifact(a.out, j.dump(2) + "\n");
  }
  return kExitOk;
}

std::vector<double> parse_axis(const std::string& text) {
  // Either lo:hi:count or v1|v2|v3.
  std::vector<double> vals;
  if (text.find('|') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t bar = text.find('|', pos);
      const std::string tok = text.substr(pos, bar == std::string::npos ? bar : bar - pos);
      if (!tok.empty()) vals.push_back(std::stod(tok));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    return vals;
  }
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("--grid", "axis must be lo:hi:count or v1|v2|...");
  const double lo = std::stod(text.substr(0, c1));
  const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const int n = std::stoi(text.substr(c2 + 1));
  if (n < 0) throw CLI::ValidationError("--grid", "count must be >= 0");
  for (int i = 0; i < n; ++i)
    vals.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0));
  return vals;
}

struct Grid {
  std::vector<double> m, gamma, alpha;
};

Grid parse_grid(const std::string& spec) {
  Grid g;
  std::size_t pos = 0;
  bool saw_m = false, saw_g = false, saw_a = false;
  while (pos < spec.size()) {
    std::size_t semi = spec.find(';', pos);
    if (semi == std::string::npos) semi = spec.size();
    const std::string part = spec.substr(pos, semi - pos);
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--grid", "expected name=axis parts separated by ';'");
    const std::string name = part.substr(0, eq);
    const std::string axis = part.substr(eq + 1);
    if (name == "m") {
      g.m = parse_axis(axis);
      saw_m = true;
    } else if (name == "gamma") {
      g.gamma = parse_axis(axis);
      saw_g = true;
    } else if (name == "alpha") {
      g.alpha = parse_axis(axis);
      saw_a = true;
    } else {
      throw CLI::ValidationError("--grid", "unknown axis: " + name);
    }
    pos = semi + 1;
  }
  if (!saw_m || !saw_g || !saw_a)
    throw CLI::ValidationError("--grid", "grid needs m, gamma and alpha axes");
  return g;
}

int cmd_sweep(const CommonArgs& a, const std::string& grid_spec) {
  using namespace hfbl;
  const Grid grid = parse_grid(grid_spec);
  RunMeta meta = base_meta("sweep", a);
  meta.set("grid", grid_spec);

  struct Point {
    double m, gamma, alpha;
  };
  std::vector<Point> pts;
  for (const double m : grid.m)
    for (const double g : grid.gamma)
      for (const double al : grid.alpha) pts.push_back({m, g, al});

  std::vector<std::string> rows(pts.size());
  const ShootOptions opts = shoot_options(a);
  parallel_for(pts.size(), [&](std::size_t i) {
    const Point& pt = pts[i];
    const Trajectory traj = solve_ivp(Params{pt.m, pt.gamma}, pt.alpha, opts);
    rows[i] = sweep_csv_row(make_report(traj, opts));
  });

  std::string out = sweep_csv_header(meta);
  for (const auto& r : rows) out += r;
  write_artifact(a.out, out);
  return kExitOk;
}

int cmd_gamma_star(const CommonArgs& a) {
  using namespace hfbl;
  if (!(a.m < -1.0) || a.m == -2.0)
    throw NoSolution{"gamma* is defined for m < -2 and -2 < m < -1 only"};

  RunMeta meta = base_meta("gamma-star", a);
  ShootOptions opts = shoot_options(a);
  const double by_shooting = gamma_star_shooting(a.m, opts);
  const GammaStarResult by_sep = gamma_star_separatrix(a.m);

  nlohmann::json j = gamma_star_json(by_sep, meta);
  j["gamma_star_shooting"] = by_shooting;
  j["difference"] = std::abs(by_shooting - by_sep.gamma_star);
  write_artifact(a.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_phase(const CommonArgs& a, const std::string& out_dir, bool cycle_probe) {
  using namespace hfbl;
  if (a.m == -2.0) throw NoSolution{"the phase portrait degenerates at m = -2"};

  RunMeta meta = base_meta("phase", a);
  const std::string dir = out_dir.empty() ? "." : out_dir;

  const auto [O, A] = equilibria(a.m);
  nlohmann::json je;
  je["format_version"] = kFormatVersion;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : meta.config) cfg[k] = v;
  je["config"] = cfg;
  je["O"] = equilibrium_json(O);
  je["A"] = equilibrium_json(A);
  write_artifact(dir + "/equilibria.json", je.dump(2) + "\n");

  // Isocline samples.
  {
    std::vector<PhasePoint> q, p;
    for (int i = 0; i <= 400; ++i) {
      const double u = -2.0 + 4.0 * i / 400.0;
      p.push_back(PhasePoint{0.0, u, 2.0 * u * u});
      if (std::abs(3.0 * u + a.m + 2.0) > 1e-3)
        q.push_back(PhasePoint{0.0, u, isocline_psi(a.m, u)});
    }
    write_artifact(dir + "/isocline_p.csv", phase_points_csv(p, meta));
    write_artifact(dir + "/isocline_q.csv", phase_points_csv(q, meta));
  }

  for (const SeparatrixId id :
       {SeparatrixId::S0, SeparatrixId::S1, SeparatrixId::S2, SeparatrixId::C3}) {
    const SeparatrixTrace tr = trace_separatrix(a.m, id);
    RunMeta tm = meta;
    tm.set("separatrix", to_string(id));
    tm.set("direction", tr.dir == TraceDir::forward ? "forward" : "backward");
    write_artifact(dir + "/sep_" + to_string(id) + ".csv",
                   phase_points_csv(tr.points, tm));
  }

  if (cycle_probe) {
    if (!(a.m > 1.0)) throw NoSolution{"the cycle probe needs m > 1"};
    const CycleProbe probe = limit_cycle_probe(a.m);
    nlohmann::json jc;
    jc["format_version"] = kFormatVersion;
    jc["config"] = cfg;
    jc["verdict"] = to_string(probe.verdict);
    if (probe.verdict == CycleProbe::Verdict::cycle) jc["v_fixed"] = probe.v_fixed;
    jc["section"] = nlohmann::json::array();
    for (const auto& [v, r] : probe.section) jc["section"].push_back({v, r});
    write_artifact(dir + "/cycle_probe.json", jc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& only, double tol_scale,
               const std::string& out) {
  using namespace hfbl;
  VerifyOptions vo;
  vo.only = only;
  vo.tol_scale = tol_scale;
  const auto results = run_verify(vo);

  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["checks"] = nlohmann::json::array();
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-34s %7.2fs%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.empty() ? "" : "  ", r.detail.c_str());
    j["checks"].push_back({{"name", r.name},
                           {"status", r.pass ? "pass" : "fail"},
                           {"seconds", r.seconds},
                           {"detail", r.detail}});
    failures += r.pass ? 0 : 1;
  }
  j["failures"] = failures;
  if (!out.empty()) write_artifact(out, j.dump(2) + "\n");
  return failures == 0 ? kExitOk : kExitInternal;
}

int cmd_asymptote(const CommonArgs& a, bool decay_2t) {
  using namespace hfbl;
  RunMeta meta = base_meta("asymptote", a);
  const ShootOptions opts = shoot_options(a);

  double alpha;
  if (a.alpha) {
    alpha = *a.alpha;
  } else {
    reject_known_empty_regimes(a.m, a.gamma);
    alpha = bounded_reports(a).front().alpha;
  }
  const Trajectory traj = solve_ivp(Params{a.m, a.gamma}, alpha, opts);

  if (decay_2t) {
    const DecayCheck dc = decay_check_2_over_t(traj);
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : meta.config) cfg[k] = v;
    j["config"] = cfg;
    j["status"] = dc.status == DecayCheck::Status::ok ? "ok" : "skipped_cycle_present";
    if (dc.status == DecayCheck::Status::ok) j["max_rel_err"] = dc.max_rel_err;
    write_artifact(a.out, j.dump(2) + "\n");
    return kExitOk;
  }

  const TailFit fit = tail_exponent(traj);
  const double target = a.m < 1.0 ? unbounded_exponent(a.m)
                                  : std::numeric_limits<double>::quiet_NaN();
  write_artifact(a.out, tail_fit_json(fit, target, meta).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity-profile solver for the prescribed-flux boundary layer ODE"};
  app.require_subcommand(1);

  CommonArgs a;
  std::string traj_out, grid_spec, out_dir;
  bool cycle_probe = false, decay_2t = false;
  std::vector<std::string> only;
  double tol_scale = 1.0;

  auto add_common = [&](CLI::App* cmd, bool need_gamma) {
    cmd->add_option("--m", a.m, "power-law exponent")->required();
    if (need_gamma) cmd->add_option("--gamma", a.gamma, "mass-transfer parameter");
    cmd->add_option("--t-max", a.t_max, "truncation horizon");
    cmd->add_option("--rel-tol", a.rel_tol, "relative tolerance");
    cmd->add_option("--abs-tol", a.abs_tol, "absolute tolerance");
    cmd->add_option("--format", a.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", a.out, "output path (stdout when omitted)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one (m, gamma) instance");
  add_common(solve, true);
  solve->add_option("--alpha", a.alpha, "explicit initial slope f'(0)");
  solve->add_flag("--shoot-bounded", a.shoot_bounded, "shoot for the bounded solution(s)");
  solve->add_option("--traj", traj_out, "also write the trajectory CSV here");

  CLI::App* sweep = app.add_subcommand("sweep", "classify a (m, gamma, alpha) grid");
  add_common(sweep, true);
  sweep->get_option("--m")->required(false);
  sweep->add_option("--grid", grid_spec,
                    "grid spec: m=lo:hi:n;gamma=lo:hi:n;alpha=lo:hi:n (or v1|v2|...)")
      ->required();

  CLI::App* gstar = app.add_subcommand("gamma-star", "critical gamma by both methods");
  add_common(gstar, false);

  CLI::App* phase = app.add_subcommand("phase", "phase-plane artifacts");
  add_common(phase, false);
  phase->add_option("--out-dir", out_dir, "directory for the emitted files");
  phase->add_flag("--cycle-probe", cycle_probe, "run the first-return cycle probe (m > 1)");

  CLI::App* verify = app.add_subcommand("verify", "run the consistency-check suite");
  verify->add_option("--only", only, "run only checks whose name contains this");
  verify->add_option("--tol-scale", tol_scale, "scale integration tolerances");
  verify->add_option("--out", a.out, "JSON summary path");

  CLI::App* asym = app.add_subcommand("asymptote", "tail diagnostics");
  add_common(asym, true);
  asym->add_option("--alpha", a.alpha, "explicit initial slope f'(0)");
  asym->add_flag("--shoot-bounded", a.shoot_bounded, "shoot first, then fit");
  asym->add_flag("--decay-2t", decay_2t, "check the 2/t tail decay (m > 3/2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      if (!a.alpha && !a.shoot_bounded)
        throw CLI::ValidationError("solve", "need --alpha or --shoot-bounded");
      return cmd_solve(a, traj_out);
    }
    if (sweep->parsed()) return cmd_sweep(a, grid_spec);
    if (gstar->parsed()) return cmd_gamma_star(a);
    if (phase->parsed()) return cmd_phase(a, out_dir, cycle_probe);
    if (verify->parsed()) return cmd_verify(only, tol_scale, a.out);
    if (asym->parsed()) {
      if (!a.alpha && !a.shoot_bounded)
        throw CLI::ValidationError("asymptote", "need --alpha or --shoot-bounded");
      return cmd_asymptote(a, decay_2t);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoSolution& ns) {
    std::cerr << "no solution in this regime: " << ns.rule << "\n";
    return kExitNoSolution;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
