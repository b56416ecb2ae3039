#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hfbl/asymptotics.hpp"
#include "hfbl/ode.hpp"
#include "hfbl/oracles.hpp"
#include "hfbl/phase.hpp"
#include "hfbl/shooting.hpp"
#include "hfbl/verify.hpp"

namespace py = pybind11;
using namespace hfbl;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shooting and phase-plane solvers for the prescribed-flux "
            "boundary-layer similarity equation";

  py::class_<Params>(m, "Params")
      .def(py::init<double, double>(), py::arg("m"), py::arg("gamma"))
      .def_readwrite("m", &Params::m)
      .def_readwrite("gamma", &Params::gamma)
      .def("__repr__", [](const Params& p) {
        return "Params(m=" + std::to_string(p.m) + ", gamma=" + std::to_string(p.gamma) + ")";
      });

  py::class_<State>(m, "State")
      .def_readonly("t", &State::t)
      .def_readonly("f", &State::f)
      .def_readonly("fp", &State::fp)
      .def_readonly("fpp", &State::fpp);

  py::enum_<EventKind>(m, "EventKind")
      .value("fp_zero", EventKind::fp_zero)
      .value("fpp_zero", EventKind::fpp_zero)
      .value("f_zero", EventKind::f_zero);

  py::class_<Event>(m, "Event")
      .def_readonly("kind", &Event::kind)
      .def_readonly("t", &Event::t)
      .def_readonly("state", &Event::state);

  py::enum_<TerminationKind>(m, "TerminationKind")
      .value("reached_t_max", TerminationKind::reached_t_max)
      .value("blowup", TerminationKind::blowup)
      .value("event_stop", TerminationKind::event_stop);

  py::class_<Termination>(m, "Termination")
      .def_readonly("kind", &Termination::kind)
      .def_readonly("t", &Termination::t);

  py::class_<IvpSpec>(m, "IvpSpec")
      .def(py::init([](double m_, double gamma, double alpha, double t_max,
                       double rel_tol, double abs_tol, double blowup_bound) {
             IvpSpec s;
             s.params = Params{m_, gamma};
             s.alpha = alpha;
             s.t_max = t_max;
             s.rel_tol = rel_tol;
             s.abs_tol = abs_tol;
             s.blowup_bound = blowup_bound;
             return s;
           }),
           py::arg("m"), py::arg("gamma"), py::arg("alpha"), py::arg("t_max") = 50.0,
           py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
           py::arg("blowup_bound") = 1e8)
      .def_readwrite("params", &IvpSpec::params)
      .def_readwrite("alpha", &IvpSpec::alpha)
      .def_readwrite("t_max", &IvpSpec::t_max)
      .def_readwrite("rel_tol", &IvpSpec::rel_tol)
      .def_readwrite("abs_tol", &IvpSpec::abs_tol);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("params", &Trajectory::params)
      .def_readonly("alpha", &Trajectory::alpha)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("events", &Trajectory::events)
      .def_readonly("termination", &Trajectory::termination)
      .def("eval", &Trajectory::eval, py::arg("t"))
      .def("t_end", &Trajectory::t_end);

  m.def("integrate", [](const IvpSpec& s) { return integrate(s); }, py::arg("spec"));
  m.def(
      "integrate_backward",
      [](const IvpSpec& s) { return integrate(s, Direction::backward); },
      py::arg("spec"));
  m.def("rhs", &rhs, py::arg("state"), py::arg("params"));
  m.def(
      "residuals",
      [](const Trajectory& t, double rho, double r) {
        const Residuals res = residuals(t, rho, r);
        return py::make_tuple(res.r1, res.r2, res.r3);
      },
      py::arg("traj"), py::arg("rho"), py::arg("r"));

  py::enum_<Shape>(m, "Shape")
      .value("concave", Shape::concave)
      .value("concave_convex", Shape::concave_convex)
      .value("rejected_fp_vanishes", Shape::rejected_fp_vanishes)
      .value("rejected_blowup", Shape::rejected_blowup)
      .value("rejected_divergent_fp", Shape::rejected_divergent_fp);

  py::enum_<BoundednessKind>(m, "BoundednessKind")
      .value("bounded", BoundednessKind::bounded)
      .value("unbounded", BoundednessKind::unbounded)
      .value("not_applicable", BoundednessKind::not_applicable);

  py::class_<Boundedness>(m, "Boundedness")
      .def_readonly("kind", &Boundedness::kind)
      .def_readonly("lambda_", &Boundedness::lambda);

  py::class_<Classification>(m, "Classification")
      .def_readonly("shape", &Classification::shape)
      .def_readonly("boundedness", &Classification::boundedness)
      .def_readonly("reason", &Classification::reason)
      .def("accepted", &Classification::accepted);

  m.def("classify", &classify, py::arg("traj"), py::arg("eps_far") = 1e-6);

  py::class_<ShootOptions>(m, "ShootOptions")
      .def(py::init<>())
      .def_readwrite("t_max", &ShootOptions::t_max)
      .def_readwrite("rel_tol", &ShootOptions::rel_tol)
      .def_readwrite("abs_tol", &ShootOptions::abs_tol)
      .def_readwrite("eps_far", &ShootOptions::eps_far)
      .def_readwrite("alpha_tol", &ShootOptions::alpha_tol)
      .def_readwrite("probe_t_max", &ShootOptions::probe_t_max);

  py::class_<Residuals>(m, "Residuals")
      .def_readonly("r1", &Residuals::r1)
      .def_readonly("r2", &Residuals::r2)
      .def_readonly("r3", &Residuals::r3);

  py::class_<SolutionReport>(m, "SolutionReport")
      .def_readonly("params", &SolutionReport::params)
      .def_readonly("alpha", &SolutionReport::alpha)
      .def_readonly("classification", &SolutionReport::classification)
      .def_readonly("lambda_est", &SolutionReport::lambda_est)
      .def_readonly("residual_far", &SolutionReport::residual_far)
      .def_readonly("identity_residuals", &SolutionReport::identity_residuals);

  py::enum_<ShootStatus>(m, "ShootStatus")
      .value("converged", ShootStatus::converged)
      .value("no_sign_change", ShootStatus::no_sign_change)
      .value("horizon_exhausted", ShootStatus::horizon_exhausted);

  py::class_<ShootResult>(m, "ShootResult")
      .def_readonly("status", &ShootResult::status)
      .def_readonly("alpha", &ShootResult::alpha)
      .def_readonly("report", &ShootResult::report);

  m.def(
      "shoot_concave",
      [](const Params& p, const ShootOptions& o) { return shoot_concave(p, o); },
      py::arg("params"), py::arg("options") = ShootOptions{});
  m.def("solve_ivp", &solve_ivp, py::arg("params"), py::arg("alpha"),
        py::arg("options") = ShootOptions{});
  m.def("make_report", &make_report, py::arg("traj"), py::arg("options") = ShootOptions{});

  py::enum_<IntervalKind>(m, "IntervalKind")
      .value("empty", IntervalKind::empty)
      .value("singleton", IntervalKind::singleton)
      .value("interval", IntervalKind::interval);

  py::class_<AlphaInterval>(m, "AlphaInterval")
      .def_readonly("lo", &AlphaInterval::lo)
      .def_readonly("hi", &AlphaInterval::hi)
      .def_readonly("kind", &AlphaInterval::kind)
      .def_readonly("hi_unbounded", &AlphaInterval::hi_unbounded);

  m.def("alpha_interval", &alpha_interval, py::arg("params"),
        py::arg("options") = ShootOptions{});
  m.def("gamma_star_shooting", &gamma_star_shooting, py::arg("m"),
        py::arg("options") = ShootOptions{});

  m.def("vector_field", &vector_field, py::arg("m"), py::arg("u"), py::arg("v"));
  m.def("isocline_psi", &isocline_psi, py::arg("m"), py::arg("u"));
  m.def("slope_field", &slope_field, py::arg("m"), py::arg("u"), py::arg("v"));

  py::enum_<EquilibriumKind>(m, "EquilibriumKind")
      .value("unstable_node", EquilibriumKind::unstable_node)
      .value("unstable_focus", EquilibriumKind::unstable_focus)
      .value("center", EquilibriumKind::center)
      .value("stable_focus", EquilibriumKind::stable_focus)
      .value("stable_node", EquilibriumKind::stable_node)
      .value("saddle_node", EquilibriumKind::saddle_node);

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_readonly("u", &Equilibrium::u)
      .def_readonly("v", &Equilibrium::v)
      .def_readonly("lambda1", &Equilibrium::lambda1)
      .def_readonly("lambda2", &Equilibrium::lambda2)
      .def_readonly("kind", &Equilibrium::kind);

  m.def("equilibria", &equilibria, py::arg("m"));
  m.def("stability_thresholds", &stability_thresholds);

  py::class_<PhasePoint>(m, "PhasePoint")
      .def_readonly("s", &PhasePoint::s)
      .def_readonly("u", &PhasePoint::u)
      .def_readonly("v", &PhasePoint::v);

  py::class_<PhaseCurve>(m, "PhaseCurve").def_readonly("points", &PhaseCurve::points);

  m.def("blowup_transform", &blowup_transform, py::arg("traj"), py::arg("tau"));

  py::enum_<SeparatrixId>(m, "SeparatrixId")
      .value("S0", SeparatrixId::S0)
      .value("S1", SeparatrixId::S1)
      .value("S2", SeparatrixId::S2)
      .value("C3", SeparatrixId::C3);

  py::class_<SepCrossing>(m, "SepCrossing")
      .def_readonly("s", &SepCrossing::s)
      .def_readonly("u", &SepCrossing::u)
      .def_readonly("v", &SepCrossing::v);

  py::class_<SeparatrixTrace>(m, "SeparatrixTrace")
      .def_readonly("points", &SeparatrixTrace::points)
      .def_readonly("crossings", &SeparatrixTrace::crossings);

  m.def(
      "trace_separatrix",
      [](double m_, SeparatrixId which) { return trace_separatrix(m_, which); },
      py::arg("m"), py::arg("which"));

  py::class_<GammaStarResult>(m, "GammaStarResult")
      .def_readonly("m", &GammaStarResult::m)
      .def_readonly("u_star", &GammaStarResult::u_star)
      .def_readonly("v_star", &GammaStarResult::v_star)
      .def_readonly("gamma_star", &GammaStarResult::gamma_star);

  m.def(
      "gamma_star_separatrix",
      [](double m_) { return gamma_star_separatrix(m_); }, py::arg("m"));

  py::class_<CycleProbe>(m, "CycleProbe")
      .def_readonly("v_fixed", &CycleProbe::v_fixed)
      .def_readonly("section", &CycleProbe::section)
      .def_property_readonly("verdict", [](const CycleProbe& c) {
        return std::string(to_string(c.verdict));
      });

  m.def(
      "limit_cycle_probe", [](double m_) { return limit_cycle_probe(m_); }, py::arg("m"));

  m.def("riccati_bounded", &riccati_bounded, py::arg("gamma"), py::arg("t"));
  m.def("riccati_limit", &riccati_limit, py::arg("gamma"));
  m.def("riccati_residual", &riccati_residual, py::arg("traj"));
  m.def("m1_eta", &m1_eta, py::arg("gamma"));
  m.def("explicit_m1", &explicit_m1, py::arg("gamma"), py::arg("t"));
  m.def("blasius_check", &blasius_check, py::arg("traj"));
  m.def("translate_scale", &translate_scale, py::arg("forward"), py::arg("backward"),
        py::arg("target_gamma"));

  py::class_<TailFit>(m, "TailFit")
      .def_readonly("exponent_est", &TailFit::exponent_est)
      .def_readonly("coeff_est", &TailFit::coeff_est)
      .def_readonly("r_squared", &TailFit::r_squared)
      .def_readonly("reliable", &TailFit::reliable);

  m.def("tail_exponent", &tail_exponent, py::arg("traj"));
  m.def("unbounded_exponent", &unbounded_exponent, py::arg("m"));

  py::class_<LambdaResult>(m, "LambdaResult")
      .def_readonly("divergent", &LambdaResult::divergent)
      .def_readonly("lambda_", &LambdaResult::lambda);

  m.def("lambda_limit", &lambda_limit, py::arg("traj"));

  m.def("run_verify", [](std::vector<std::string> only, double tol_scale) {
    VerifyOptions vo;
    vo.only = std::move(only);
    vo.tol_scale = tol_scale;
    std::vector<py::dict> out;
    for (const auto& r : run_verify(vo)) {
      py::dict d;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["detail"] = r.detail;
      d["seconds"] = r.seconds;
      out.push_back(std::move(d));
    }
    return out;
  }, py::arg("only") = std::vector<std::string>{}, py::arg("tol_scale") = 1.0);
}
