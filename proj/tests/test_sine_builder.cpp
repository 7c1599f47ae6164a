#include <cmath>

#include "doctest.h"
#include "sinex/errors.hpp"
#include "sinex/sine_builder.hpp"

using namespace sinex;

TEST_CASE("parameter normalization") {
  const SineParams p = make_sine_params(0.5, 1.0, 2.0, 0.0);
  CHECK(p.amplitude == 0.5);
  CHECK(p.omega == 1.0);
  CHECK(p.bias == 2.0);
  CHECK(p.phase == 0.0);

  CHECK_THROWS_AS(make_sine_params(1.0, 0.0, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_sine_params(std::nan(""), 1.0, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_sine_params(1.0, 1.0, HUGE_VAL, 0.0), InvalidArgument);
}

TEST_CASE("negative amplitude folds into the phase") {
  const SineParams p = make_sine_params(-2.0, 3.0, 1.0, 0.5);
  CHECK(p.amplitude == 2.0);
  CHECK(p.omega == 3.0);
  // -A sin(w t + phi) == A sin(w t + phi + pi): same signal at a few times.
  for (double t : {0.0, 0.3, 1.7}) {
    const double direct = -2.0 * std::sin(3.0 * t + 0.5) + 1.0;
    const double folded = p.amplitude * std::sin(p.omega * t + p.phase) + p.bias;
    CHECK(folded == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("initial conditions of the reference signals are exact") {
  const InitState a = initial_conditions(make_sine_params(0.5, 1.0, 2.0, 0.0));
  CHECK(a.x0 == -0.5);
  CHECK(a.y0 == 2.0);
  CHECK(a.t0 == 0.0);

  const InitState b = initial_conditions(make_sine_params(10.0, 0.5, 20.0, 0.0));
  CHECK(b.x0 == -20.0);
  CHECK(b.y0 == 20.0);
  CHECK(b.t0 == 0.0);
}

TEST_CASE("initial conditions with a phase") {
  const double A = 3.0, w = 2.0, mu = 1.0, phi = 0.7;
  const InitState s = initial_conditions(make_sine_params(A, w, mu, phi));
  CHECK(s.x0 == doctest::Approx(-(A / w) * std::cos(phi)).epsilon(1e-15));
  CHECK(s.y0 == doctest::Approx(A * std::sin(phi) + mu).epsilon(1e-15));
  CHECK(s.t0 == 0.0);
}

TEST_CASE("initial box enlargement") {
  const InitState s = initial_conditions(make_sine_params(10.0, 0.5, 20.0, 0.0));
  const StateBox box = enlarge_initial(s, 0.2);
  CHECK(box.x.lo == doctest::Approx(-22.0).epsilon(1e-15));
  CHECK(box.x.hi == doctest::Approx(-18.0).epsilon(1e-15));
  CHECK(box.y.lo == doctest::Approx(18.0).epsilon(1e-15));
  CHECK(box.y.hi == doctest::Approx(22.0).epsilon(1e-15));
  CHECK(box.t.lo == 0.0);
  CHECK(box.t.hi == 0.0);

  const InitState s41 = initial_conditions(make_sine_params(0.5, 1.0, 2.0, 0.0));
  const StateBox b41 = enlarge_initial(s41, 0.2);
  CHECK(b41.x.lo == doctest::Approx(-0.55).epsilon(1e-15));
  CHECK(b41.x.hi == doctest::Approx(-0.45).epsilon(1e-15));
  CHECK(b41.y.lo == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(b41.y.hi == doctest::Approx(2.2).epsilon(1e-15));

  const StateBox point = enlarge_initial(s, 0.0);
  CHECK(point.x.lo == point.x.hi);
  CHECK(point.y.radius() == 0.0);

  CHECK_THROWS_AS(enlarge_initial(s, -0.1), InvalidArgument);
}

TEST_CASE("oscillator component shape") {
  const BaseComponent c = build_sine_component();
  CHECK(c.id == "sin");
  REQUIRE(c.params.size() == 5);

  const ParamDecl* x = c.find_param("x");
  REQUIRE(x != nullptr);
  CHECK(x->kind == ParamKind::variable);
  CHECK(x->controlled);
  CHECK(x->local);

  const ParamDecl* y = c.find_param("y");
  REQUIRE(y != nullptr);
  CHECK_FALSE(y->local);
  CHECK(y->controlled);

  const ParamDecl* t = c.find_param("t");
  REQUIRE(t != nullptr);
  CHECK(t->local);

  for (const char* name : {"omega", "mu"}) {
    const ParamDecl* k = c.find_param(name);
    REQUIRE(k != nullptr);
    CHECK(k->kind == ParamKind::constant);
    CHECK_FALSE(k->controlled);
    CHECK_FALSE(k->local);
    CHECK(k->dynamics == Dynamics::constant);
  }

  REQUIRE(c.locations.size() == 1);
  CHECK(c.locations[0].id == 1);
  CHECK(c.locations[0].name == "loc1");
  REQUIRE(c.locations[0].flow.size() == 3);
  CHECK(c.locations[0].flow[0].var == "x");
  CHECK(render_expr(c.locations[0].flow[0].rhs) == "y");
  CHECK(c.locations[0].flow[1].var == "y");
  CHECK(render_expr(c.locations[0].flow[1].rhs) == "-omega*omega*(x - mu*t)");
  CHECK(c.locations[0].flow[2].var == "t");
  CHECK(render_expr(c.locations[0].flow[2].rhs) == "1");
}

TEST_CASE("clock component shape") {
  const BaseComponent c = build_clock_component();
  CHECK(c.id == "clock");
  REQUIRE(c.params.size() == 1);
  CHECK(c.params[0].name == "t_gl");
  CHECK_FALSE(c.params[0].local);
  REQUIRE(c.locations.size() == 1);
  REQUIRE(c.locations[0].flow.size() == 1);
  CHECK(render_expr(c.locations[0].flow[0].rhs) == "1");
}

TEST_CASE("network wiring carries the parameter values") {
  const Model m = build_network(make_sine_params(0.5, 1.0, 2.0, 0.0));
  REQUIRE(m.components.size() == 2);
  REQUIRE(m.network.has_value());
  CHECK(m.network->id == "system");
  REQUIRE(m.network->params.size() == 2);
  CHECK(m.network->params[0].name == "y");
  CHECK(m.network->params[1].name == "t_gl");
  REQUIRE(m.network->binds.size() == 2);

  const Bind& sin_bind = m.network->binds[0];
  CHECK(sin_bind.component == "sin");
  CHECK(sin_bind.alias == "sin_1");
  REQUIRE(sin_bind.map.size() == 3);
  CHECK(sin_bind.map[0].key == "y");
  CHECK(actual_is_identifier(sin_bind.map[0].actual));
  CHECK(sin_bind.map[1].key == "omega");
  CHECK(sin_bind.map[1].actual->text == "1");
  CHECK(sin_bind.map[2].key == "mu");
  CHECK(sin_bind.map[2].actual->text == "2");

  const Bind& clock_bind = m.network->binds[1];
  CHECK(clock_bind.component == "clock");
  CHECK(clock_bind.alias == "clock_1");
  REQUIRE(clock_bind.map.size() == 1);
  CHECK(clock_bind.map[0].key == "t_gl");
  CHECK(actual_is_identifier(clock_bind.map[0].actual));
}

TEST_CASE("simulink block mapping") {
  SimulinkSineBlock b;
  b.amplitude = 10.0;
  b.bias = 20.0;
  b.frequency = 0.5;
  b.phase = 0.0;
  const SineParams p = from_simulink(b);
  CHECK(p.amplitude == 10.0);
  CHECK(p.omega == 0.5);
  CHECK(p.bias == 20.0);
  CHECK(p.phase == 0.0);

  SUBCASE("nonzero sample time is rejected") {
    b.sample_time = 0.1;
    CHECK_THROWS_AS(from_simulink(b), NonZeroSampleTimeError);
  }
  SUBCASE("sample based mode is rejected even with zero sample time") {
    b.sine_type = SineType::sample_based;
    CHECK_THROWS_AS(from_simulink(b), SampleBasedUnsupportedError);
    b.sample_time = 0.1;
    CHECK_THROWS_AS(from_simulink(b), SampleBasedUnsupportedError);
  }
}
