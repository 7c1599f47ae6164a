#include "sinex/sine_builder.hpp"

#include <cmath>

#include "sinex/errors.hpp"

namespace sinex {

SineParams make_sine_params(double amplitude, double omega, double bias, double phase) {
  if (!(std::isfinite(amplitude) && std::isfinite(omega) && std::isfinite(bias) &&
        std::isfinite(phase)))
    throw InvalidArgument("sine parameters must be finite");
  if (omega == 0.0) throw InvalidArgument("omega must be nonzero");
  if (amplitude < 0.0) {
    amplitude = -amplitude;
    phase += std::acos(-1.0);
  }
  return SineParams{amplitude, omega, bias, phase};
}

InitState initial_conditions(const SineParams& p) {
  InitState s;
  s.x0 = -(p.amplitude / p.omega) * std::cos(p.phase);
  s.y0 = p.amplitude * std::sin(p.phase) + p.bias;
  s.t0 = 0.0;
  return s;
}

StateBox enlarge_initial(const InitState& s, double fraction) {
  if (!(fraction >= 0.0)) throw InvalidArgument("enlargement fraction must be >= 0");
  const auto widen = [fraction](double c) {
    const double r = 0.5 * fraction * std::abs(c);
    return Interval{c - r, c + r};
  };
  return StateBox{widen(s.x0), widen(s.y0), Interval{0.0, 0.0}};
}

BaseComponent build_sine_component() {
  BaseComponent c;
  c.id = "sin";
  c.params = {
      variable_param("x", true, true),
      variable_param("y", true, false),
      variable_param("t", true, true),
      constant_param("omega", false, false),
      constant_param("mu", false, false),
  };
  Location loc;
  loc.id = 1;
  loc.name = "loc1";
  loc.flow = {
      {"x", ident("y")},
      // Written as omega*omega: the target grammar has no power operator.
      {"y", mul(mul(neg(ident("omega")), ident("omega")),
                sub(ident("x"), mul(ident("mu"), ident("t"))))},
      {"t", lit(1.0)},
  };
  c.locations.push_back(std::move(loc));
  return c;
}

BaseComponent build_clock_component() {
  BaseComponent c;
  c.id = "clock";
  c.params = {variable_param("t_gl", true, false)};
  Location loc;
  loc.id = 1;
  loc.name = "loc1";
  loc.flow = {{"t_gl", lit(1.0)}};
  c.locations.push_back(std::move(loc));
  return c;
}

Model build_network(const SineParams& p) {
  Model m;
  m.components.push_back(build_sine_component());
  m.components.push_back(build_clock_component());

  NetworkComponent net;
  net.id = "system";
  net.params = {
      variable_param("y", true, false),
      variable_param("t_gl", true, false),
  };

  Bind sine_bind;
  sine_bind.component = "sin";
  sine_bind.alias = "sin_1";
  sine_bind.map = {
      {"y", ident("y")},
      {"omega", lit(p.omega)},
      {"mu", lit(p.bias)},
  };
  net.binds.push_back(std::move(sine_bind));

  Bind clock_bind;
  clock_bind.component = "clock";
  clock_bind.alias = "clock_1";
  clock_bind.map = {{"t_gl", ident("t_gl")}};
  net.binds.push_back(std::move(clock_bind));

  m.network = std::move(net);
  return m;
}

SineParams from_simulink(const SimulinkSineBlock& b) {
  if (b.sine_type == SineType::sample_based)
    throw SampleBasedUnsupportedError(
        "sample-based sine blocks have no continuous-time encoding");
  if (b.sample_time != 0.0)
    throw NonZeroSampleTimeError(
        "sample time must be 0 (continuous-time semantics required)");
  return make_sine_params(b.amplitude, b.frequency, b.bias, b.phase);
}

}  // namespace sinex
