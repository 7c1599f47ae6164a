#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "sinex/analysis.hpp"
#include "sinex/errors.hpp"

using namespace sinex;

namespace {

const SineParams kSmall = make_sine_params(0.5, 1.0, 2.0, 0.0);
const SineParams kLarge = make_sine_params(10.0, 0.5, 20.0, 0.0);

StateBox box_of(const SineParams& p, double fraction) {
  return enlarge_initial(initial_conditions(p), fraction);
}

// Exact trajectories from random points of the initial box, sampled at
// random times. Everything comes from the oracle, nothing from the library.
Trajectory oracle_trajectory(std::mt19937_64& rng, const StateBox& box, const SineParams& p,
                             double horizon, int n_samples) {
  const StateVector s0{oracle::uniform(rng, box.x.lo, box.x.hi),
                       oracle::uniform(rng, box.y.lo, box.y.hi),
                       oracle::uniform(rng, box.t.lo, box.t.hi)};
  Trajectory tr;
  tr.method = TrajectoryMethod::analytic;
  for (int i = 0; i < n_samples; ++i) {
    const double tau = oracle::uniform(rng, 0.0, horizon);
    tr.samples.push_back({tau, oracle::advance(p.omega, p.bias, s0, tau)});
  }
  return tr;
}

double signed_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& u = poly[i];
    const Point2& v = poly[(i + 1) % poly.size()];
    a += u.x * v.y - v.x * u.y;
  }
  return 0.5 * a;
}

}  // namespace

TEST_CASE("flowpipe segment layout") {
  const Flowpipe fp = flowpipe(box_of(kSmall, 0.0), kSmall, 0.01, 10.0);
  REQUIRE(fp.segments.size() == 1000);
  CHECK(fp.step == 0.01);
  CHECK(fp.horizon == 10.0);
  CHECK(fp.segments.front().t_begin == 0.0);
  CHECK(fp.segments.back().t_end == 10.0);
  for (std::size_t k = 1; k < fp.segments.size(); ++k)
    CHECK(fp.segments[k].t_begin == fp.segments[k - 1].t_end);
  for (const FlowpipeSegment& seg : fp.segments) CHECK(seg.set.bloat > 0.0);

  // Partial final step.
  const Flowpipe part = flowpipe(box_of(kSmall, 0.0), kSmall, 0.4, 1.0);
  REQUIRE(part.segments.size() == 3);
  CHECK(part.segments[2].t_begin == doctest::Approx(0.8));
  CHECK(part.segments[2].t_end == 1.0);

  CHECK_THROWS_AS(flowpipe(box_of(kSmall, 0.0), kSmall, 0.0, 10.0), InvalidArgument);
  CHECK_THROWS_AS(flowpipe(box_of(kSmall, 0.0), kSmall, 0.5, 0.25), InvalidArgument);
}

TEST_CASE("flowpipe rejects steps beyond the trust region") {
  const SineParams fast = make_sine_params(1.0, 20.0, 0.0, 0.0);
  // |M|_inf = 400; delta 0.05 gives norm 20 > 16.
  CHECK_THROWS_AS(flowpipe(box_of(fast, 0.0), fast, 0.05, 1.0), StepTooLargeError);
  CHECK_NOTHROW(flowpipe(box_of(fast, 0.0), fast, 0.01, 0.5));
}

TEST_CASE("each segment covers its time slice") {
  const Flowpipe fp = flowpipe(box_of(kLarge, 0.2), kLarge, 0.01, 10.0);
  for (std::size_t k = 0; k < fp.segments.size(); k += 97) {
    const Interval t_extent = parallelotope_extent(fp.segments[k].set, Dim::t);
    CHECK(t_extent.lo <= fp.segments[k].t_begin + 1e-12);
    CHECK(t_extent.hi >= fp.segments[k].t_end - 1e-12);
  }
}

TEST_CASE("nominal rk4 runs are contained with positive margin") {
  for (const SineParams& p : {kSmall, kLarge}) {
    for (double fraction : {0.0, 0.2}) {
      CAPTURE(p.amplitude);
      CAPTURE(fraction);
      const StateBox box = box_of(p, fraction);
      const Flowpipe fp = flowpipe(box, p, 0.01, 10.0);
      const InitState init = initial_conditions(p);
      const Trajectory sim = simulate(p, {init.x0, init.y0, 0.0}, 0.01, 10.0);
      const ContainmentReport rep = check_containment(fp, sim);
      CHECK(rep.contained);
      CHECK(rep.margin > 0.0);
      CHECK(rep.violations.empty());
      // t is pinned to a point, so the generator matrix is singular and the
      // interval-hull fallback must be what ran.
      CHECK_FALSE(rep.fallback_segments.empty());
    }
  }
}

TEST_CASE("property: 100 exact trajectories stay inside the enlarged-box flowpipe") {
  std::mt19937_64 rng(20260818u);
  const StateBox box = box_of(kLarge, 0.2);
  const Flowpipe fp = flowpipe(box, kLarge, 0.01, 10.0);
  for (int run = 0; run < 100; ++run) {
    const Trajectory tr = oracle_trajectory(rng, box, kLarge, 10.0, 20);
    const ContainmentReport rep = check_containment(fp, tr);
    CAPTURE(run);
    CHECK(rep.contained);
    CHECK(rep.margin >= 0.0);
  }
}

TEST_CASE("property: soundness across random parameter draws") {
  std::mt19937_64 rng(99u);
  for (int round = 0; round < 10; ++round) {
    const double A = oracle::uniform(rng, 0.5, 5.0);
    const double w = oracle::uniform(rng, 0.3, 2.0);
    const double mu = oracle::uniform(rng, -3.0, 3.0);
    const double phi = oracle::uniform(rng, -3.0, 3.0);
    const SineParams p = make_sine_params(A, w, mu, phi);
    const StateBox box = box_of(p, 0.1);
    const Flowpipe fp = flowpipe(box, p, 0.02, 5.0);
    for (int run = 0; run < 10; ++run) {
      const Trajectory tr = oracle_trajectory(rng, box, p, 5.0, 10);
      const ContainmentReport rep = check_containment(fp, tr);
      CAPTURE(round);
      CAPTURE(run);
      CHECK(rep.contained);
    }
  }
}

TEST_CASE("flowpipe tightness on the point-initial run") {
  const Flowpipe fp = flowpipe(box_of(kSmall, 0.0), kSmall, 0.01, 10.0);
  const Interval y = flowpipe_extent(fp, Dim::y);
  // True range of y is [1.5, 2.5]; the over-approximation must cover it and
  // exceed it by less than 5% of the amplitude.
  CHECK(y.hi >= 2.5);
  CHECK(y.hi < 2.5 + 0.025);
  CHECK(y.lo <= 1.5);
  CHECK(y.lo > 1.5 - 0.025);
}

TEST_CASE("containment flags a wrong frequency") {
  const StateBox box = box_of(kSmall, 0.0);
  const Flowpipe fp = flowpipe(box, kSmall, 0.01, 10.0);
  const SineParams wrong = make_sine_params(0.5, 1.25, 2.0, 0.0);
  const InitState init = initial_conditions(kSmall);
  const Trajectory sim = simulate(wrong, {init.x0, init.y0, 0.0}, 0.01, 10.0);
  const ContainmentReport rep = check_containment(fp, sim);
  CHECK_FALSE(rep.contained);
  CHECK(rep.margin < 0.0);
  REQUIRE_FALSE(rep.violations.empty());
  const Violation& v = rep.violations.front();
  CHECK(v.time >= 0.0);
  CHECK(v.time <= 10.0);
  CHECK(v.segment_index >= 0);
  CHECK(v.sample_index < sim.samples.size());
  // The reported state is the sample itself.
  CHECK(v.state == sim.samples[v.sample_index].state);
}

TEST_CASE("containment without the singular-generator fallback") {
  // A box with nonzero width in every dimension keeps the generator matrix
  // invertible, so the parallelotope solve runs instead of the fallback.
  const StateBox box{{-0.6, -0.4}, {1.9, 2.1}, {0.0, 0.05}};
  const Flowpipe fp = flowpipe(box, kSmall, 0.01, 5.0);
  Trajectory center;
  center.method = TrajectoryMethod::analytic;
  std::mt19937_64 rng(5u);
  const StateVector c0{box.x.center(), box.y.center(), box.t.center()};
  for (int i = 0; i < 50; ++i) {
    const double tau = oracle::uniform(rng, 0.0, 5.0);
    center.samples.push_back({tau, oracle::advance(kSmall.omega, kSmall.bias, c0, tau)});
  }
  const ContainmentReport rep = check_containment(fp, center);
  CHECK(rep.contained);
  CHECK(rep.margin > 0.5);
  CHECK(rep.fallback_segments.empty());
}

TEST_CASE("containment edge cases") {
  const Flowpipe fp = flowpipe(box_of(kSmall, 0.0), kSmall, 0.1, 1.0);

  Trajectory empty;
  const ContainmentReport rep = check_containment(fp, empty);
  CHECK(rep.contained);
  CHECK(std::isinf(rep.margin));
  CHECK(rep.margin > 0.0);

  Trajectory beyond;
  beyond.samples.push_back({2.0, {0, 0, 2.0}});
  CHECK_THROWS_AS(check_containment(fp, beyond), InvalidArgument);

  Trajectory negative;
  negative.samples.push_back({-0.5, {0, 0, -0.5}});
  CHECK_THROWS_AS(check_containment(fp, negative), InvalidArgument);

  CHECK_THROWS_AS(check_containment(Flowpipe{}, empty), InvalidArgument);

  // A sample exactly on a segment boundary belongs to both segments.
  const InitState init = initial_conditions(kSmall);
  Trajectory on_boundary;
  on_boundary.samples.push_back({0.5, oracle::advance(kSmall.omega, kSmall.bias,
                                                      {init.x0, init.y0, 0.0}, 0.5)});
  CHECK(check_containment(fp, on_boundary).contained);
}

TEST_CASE("projection produces convex counterclockwise polygons") {
  const Flowpipe fp = flowpipe(box_of(kLarge, 0.2), kLarge, 0.05, 2.0);
  CHECK_THROWS_AS(project_flowpipe(fp, Dim::y, Dim::y), InvalidArgument);

  const std::vector<Polygon> polys = project_flowpipe(fp, Dim::t, Dim::y);
  REQUIRE(polys.size() == fp.segments.size());
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const std::vector<Point2>& v = polys[k].vertices;
    REQUIRE(v.size() >= 3);
    CHECK(v.size() % 2 == 0);  // a zonotope shadow has 2m vertices
    CHECK(signed_area(v) > 0.0);
    // Convexity: every corner turns left.
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point2& a = v[i];
      const Point2& b = v[(i + 1) % v.size()];
      const Point2& c = v[(i + 2) % v.size()];
      const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
      CHECK(cross >= -1e-12);
    }
    // The polygon's bounding box is the segment's axis-aligned extent.
    const Interval et = parallelotope_extent(fp.segments[k].set, Dim::t);
    const Interval ey = parallelotope_extent(fp.segments[k].set, Dim::y);
    double tlo = v[0].x, thi = v[0].x, ylo = v[0].y, yhi = v[0].y;
    for (const Point2& pt : v) {
      tlo = std::min(tlo, pt.x);
      thi = std::max(thi, pt.x);
      ylo = std::min(ylo, pt.y);
      yhi = std::max(yhi, pt.y);
    }
    CHECK(tlo == doctest::Approx(et.lo).epsilon(1e-12));
    CHECK(thi == doctest::Approx(et.hi).epsilon(1e-12));
    CHECK(ylo == doctest::Approx(ey.lo).epsilon(1e-12));
    CHECK(yhi == doctest::Approx(ey.hi).epsilon(1e-12));
  }
}

TEST_CASE("projected samples land inside their segment's polygon") {
  std::mt19937_64 rng(31u);
  const StateBox box = box_of(kLarge, 0.2);
  const Flowpipe fp = flowpipe(box, kLarge, 0.05, 5.0);
  const std::vector<Polygon> polys = project_flowpipe(fp, Dim::x, Dim::y);
  for (int run = 0; run < 30; ++run) {
    const StateVector s0{oracle::uniform(rng, box.x.lo, box.x.hi),
                         oracle::uniform(rng, box.y.lo, box.y.hi), 0.0};
    const double tau = oracle::uniform(rng, 0.0, 5.0);
    const StateVector s = oracle::advance(kLarge.omega, kLarge.bias, s0, tau);
    const std::size_t k =
        std::min<std::size_t>(static_cast<std::size_t>(tau / 0.05), polys.size() - 1);
    CAPTURE(run);
    CHECK(oracle::in_convex_polygon(polys[k].vertices, s.x, s.y, 1e-9));
  }
}

TEST_CASE("box parallelotope and extents") {
  const StateBox box{{-2.0, 4.0}, {1.0, 1.0}, {0.0, 10.0}};
  const Parallelotope par = box_parallelotope(box);
  CHECK(par.bloat == 0.0);
  const Interval ex = parallelotope_extent(par, Dim::x);
  CHECK(ex.lo == -2.0);
  CHECK(ex.hi == 4.0);
  const Interval ey = parallelotope_extent(par, Dim::y);
  CHECK(ey.lo == 1.0);
  CHECK(ey.hi == 1.0);

  CHECK_THROWS_AS(flowpipe_extent(Flowpipe{}, Dim::x), InvalidArgument);

  const Flowpipe fp = flowpipe(box_of(kSmall, 0.0), kSmall, 0.01, 10.0);
  const Interval whole = flowpipe_extent(fp, Dim::t);
  CHECK(whole.lo <= 0.0);
  CHECK(whole.hi >= 10.0);
}
