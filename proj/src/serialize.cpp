#include "hfbl/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace hfbl {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void RunMeta::set(const std::string& key, double value) { set(key, fmt17(value)); }

std::string csv_preamble(const RunMeta& meta) {
  std::string out;
  out += "# format=";
  out += kFormatVersion;
  out += "\n";
  for (const auto& [k, v] : meta.config) {
    out += "# ";
    out += k;
    out += "=";
    out += v;
    out += "\n";
  }
  return out;
}

namespace {

nlohmann::json meta_json(const RunMeta& meta) {
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : meta.config) cfg[k] = v;
  return cfg;
}

nlohmann::json params_json(const Params& p) {
  return {{"m", p.m}, {"gamma", p.gamma}};
}

nlohmann::json state_json(const State& s) {
  return {{"t", s.t}, {"f", s.f}, {"fp", s.fp}, {"fpp", s.fpp}};
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const RunMeta& meta) {
  std::string out = csv_preamble(meta);
  out += "t,f,fp,fpp\n";
  for (const auto& s : traj.states) {
    out += fmt17(s.t);
    out += ",";
    out += fmt17(s.f);
    out += ",";
    out += fmt17(s.fp);
    out += ",";
    out += fmt17(s.fpp);
    out += "\n";
  }
  return out;
}

nlohmann::json trajectory_json(const Trajectory& traj, const RunMeta& meta) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = meta_json(meta);
  j["params"] = params_json(traj.params);
  j["alpha"] = traj.alpha;
  nlohmann::json term;
  term["kind"] = to_string(traj.termination.kind);
  term["t"] = traj.termination.t;
  if (traj.termination.stopping_event)
    term["event"] = to_string(*traj.termination.stopping_event);
  j["termination"] = term;
  j["events"] = nlohmann::json::array();
  for (const auto& e : traj.events)
    j["events"].push_back(
        {{"kind", to_string(e.kind)}, {"t", e.t}, {"state", state_json(e.state)}});
  j["states"] = nlohmann::json::array();
  for (const auto& s : traj.states) j["states"].push_back(state_json(s));
  return j;
}

nlohmann::json classification_json(const Classification& cls) {
  nlohmann::json j;
  j["shape"] = to_string(cls.shape);
  j["boundedness"] = to_string(cls.boundedness.kind);
  if (cls.boundedness.kind == BoundednessKind::bounded)
    j["lambda"] = cls.boundedness.lambda;
  if (!cls.reason.empty()) j["reason"] = cls.reason;
  return j;
}

nlohmann::json report_json(const SolutionReport& rep, const RunMeta& meta) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = meta_json(meta);
  j["params"] = params_json(rep.params);
  j["alpha"] = rep.alpha;
  j["classification"] = classification_json(rep.classification);
  if (rep.lambda_est) j["lambda_est"] = *rep.lambda_est;
  j["residual_far"] = rep.residual_far;
  j["identity_residuals"] = {rep.identity_residuals.r1, rep.identity_residuals.r2,
                             rep.identity_residuals.r3};
  return j;
}

std::string sweep_csv_header(const RunMeta& meta) {
  return csv_preamble(meta) + "m,gamma,alpha,shape,bounded,lambda,residual_far\n";
}

std::string sweep_csv_row(const SolutionReport& rep) {
  std::string out;
  out += fmt17(rep.params.m);
  out += ",";
  out += fmt17(rep.params.gamma);
  out += ",";
  out += fmt17(rep.alpha);
  out += ",";
  out += to_string(rep.classification.shape);
  out += ",";
  out += to_string(rep.classification.boundedness.kind);
  out += ",";
  out += rep.lambda_est ? fmt17(*rep.lambda_est) : "";
  out += ",";
  out += fmt17(rep.residual_far);
  out += "\n";
  return out;
}

nlohmann::json alpha_interval_json(const Params& p, const AlphaInterval& iv,
                                   const RunMeta& meta) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = meta_json(meta);
  j["params"] = params_json(p);
  j["kind"] = to_string(iv.kind);
  if (iv.kind != IntervalKind::empty) {
    j["lo"] = iv.lo;
    if (iv.hi_unbounded)
      j["hi"] = nullptr;
    else
      j["hi"] = iv.hi;
    j["hi_unbounded"] = iv.hi_unbounded;
  }
  return j;
}

std::string phase_points_csv(const std::vector<PhasePoint>& pts, const RunMeta& meta) {
  std::string out = csv_preamble(meta);
  out += "s,u,v\n";
  for (const auto& p : pts) {
    out += fmt17(p.s);
    out += ",";
    out += fmt17(p.u);
    out += ",";
    out += fmt17(p.v);
    out += "\n";
  }
  return out;
}

nlohmann::json gamma_star_json(const GammaStarResult& gs, const RunMeta& meta) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = meta_json(meta);
  j["m"] = gs.m;
  j["u_star"] = gs.u_star;
  j["v_star"] = gs.v_star;
  j["gamma_star"] = gs.gamma_star;
  j["method"] = "separatrix";
  return j;
}

nlohmann::json equilibrium_json(const Equilibrium& eq) {
  nlohmann::json j;
  j["u"] = eq.u;
  j["v"] = eq.v;
  j["kind"] = to_string(eq.kind);
  j["eigenvalues"] = {{eq.lambda1.real(), eq.lambda1.imag()},
                      {eq.lambda2.real(), eq.lambda2.imag()}};
  return j;
}

nlohmann::json tail_fit_json(const TailFit& fit, double target_exponent,
                             const RunMeta& meta) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = meta_json(meta);
  j["exponent_est"] = fit.exponent_est;
  j["coeff_est"] = fit.coeff_est;
  j["window"] = {fit.window_lo, fit.window_hi};
  j["r_squared"] = fit.r_squared;
  j["target_exponent"] = target_exponent;
  const double rel = std::abs(fit.exponent_est - target_exponent) /
                     std::max(1e-12, std::abs(target_exponent));
  j["verdict"] = !fit.reliable ? "unreliable" : (rel <= 0.05 ? "match" : "mismatch");
  return j;
}

}  // namespace hfbl
