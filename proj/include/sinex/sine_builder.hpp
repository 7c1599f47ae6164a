#pragma once

#include "sinex/model.hpp"

namespace sinex {

// A*sin(omega*t + phi) + mu. Construct via make_sine_params, which keeps
// the invariants: omega != 0, amplitude >= 0 (negative amplitude folds
// into the phase).
struct SineParams {
  double amplitude = 1.0;
  double omega = 1.0;
  double bias = 0.0;
  double phase = 0.0;

  friend bool operator==(const SineParams&, const SineParams&) = default;
};

SineParams make_sine_params(double amplitude, double omega, double bias, double phase);

struct InitState {
  double x0 = 0.0;
  double y0 = 0.0;
  double t0 = 0.0;

  friend bool operator==(const InitState&, const InitState&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double center() const { return 0.5 * (lo + hi); }
  double radius() const { return 0.5 * (hi - lo); }
  bool contains(double v) const { return lo <= v && v <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct StateBox {
  Interval x;
  Interval y;
  Interval t;

  friend bool operator==(const StateBox&, const StateBox&) = default;
};

enum class SineType { time_based, sample_based };

struct SimulinkSineBlock {
  double amplitude = 1.0;
  double bias = 0.0;
  double frequency = 1.0;  // rad/s
  double phase = 0.0;      // rad
  double sample_time = 0.0;
  SineType sine_type = SineType::time_based;
};

InitState initial_conditions(const SineParams& p);

// Total width of each of x, y becomes fraction*|nominal|, centered at the
// nominal value; t stays pinned to [0,0].
StateBox enlarge_initial(const InitState& s, double fraction);

BaseComponent build_sine_component();
BaseComponent build_clock_component();
Model build_network(const SineParams& p);

SineParams from_simulink(const SimulinkSineBlock& b);

}  // namespace sinex
