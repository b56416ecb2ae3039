#ifndef HFBL_TYPES_HPP
#define HFBL_TYPES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hfbl {

/// Problem instance: the power-law exponent m and the wall mass-transfer
/// parameter gamma. gamma < 0 is suction, gamma > 0 injection.
struct Params {
  double m = 0.0;
  double gamma = 0.0;
};

/// Integration state. fppp is derived through the right-hand side, never stored.
struct State {
  double t = 0.0;
  double f = 0.0;
  double fp = 0.0;   // f'
  double fpp = 0.0;  // f''
};

enum class EventKind : std::uint8_t { fp_zero, fpp_zero, f_zero };

const char* to_string(EventKind k);

struct Event {
  EventKind kind;
  double t;
  State state;
};

enum class TerminationKind : std::uint8_t { reached_t_max, blowup, event_stop };

const char* to_string(TerminationKind k);

struct Termination {
  TerminationKind kind = TerminationKind::reached_t_max;
  double t = 0.0;                          // blow-up time or stopping-event time
  std::optional<EventKind> stopping_event; // set for event_stop on a watched kind
};

/// Which of the three scalar components to watch for sign changes.
struct EventSet {
  bool fp_zero = false;
  bool fpp_zero = false;
  bool f_zero = false;

  static EventSet all() { return {true, true, true}; }
  static EventSet none() { return {false, false, false}; }
  bool contains(EventKind k) const;
};

/// Initial value problem f''' = -(m+2) f f'' + (2m+1) f'^2 with
/// f(0) = -gamma, f'(0) = alpha, f''(0) = -1, integrated on [0, t_max].
struct IvpSpec {
  Params params;
  double alpha = 0.0;
  double t_max = 50.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double blowup_bound = 1e8;
  EventSet events = EventSet::all();
  EventSet stop_on = EventSet::none();

  State initial_state() const { return State{0.0, -params.gamma, alpha, -1.0}; }
};

/// One accepted integrator step with its quartic interpolation coefficients.
/// eval is valid for t between t0 and t0+h (h carries the integration sign).
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<double, 3> y0{}, rc2{}, rc3{}, rc4{}, rc5{};

  std::array<double, 3> eval(double t) const {
    const double th = (t - t0) / h;
    const double om = 1.0 - th;
    std::array<double, 3> y{};
    for (int i = 0; i < 3; ++i)
      y[i] = y0[i] + th * (rc2[i] + om * (rc3[i] + th * (rc4[i] + om * rc5[i])));
    return y;
  }
};

/// Integrated orbit of (f, f', f'') with located events and the cause of
/// termination. States are stored in integration order; direction is -1 for
/// backward runs.
struct Trajectory {
  Params params;
  double alpha = 0.0;
  int direction = +1;
  std::vector<State> states;
  std::vector<Event> events;
  Termination termination;
  std::vector<DenseStep> steps;

  double t_begin() const { return states.front().t; }
  double t_end() const { return states.back().t; }
  bool contains_time(double t) const;
  /// Dense-output evaluation; t must lie inside the integrated range.
  State eval(double t) const;

  bool has_event(EventKind k) const;
  std::optional<Event> first_event(EventKind k) const;
  std::size_t count_events(EventKind k) const;
};

struct Residuals {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

}  // namespace hfbl

#endif
