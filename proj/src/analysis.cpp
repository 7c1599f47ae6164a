#include "sinex/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sinex/errors.hpp"
#include "sinex/numfmt.hpp"

namespace sinex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

// Sample times 0 = t_0 < ... < t_n = T with t_k = k*delta; when T is not a
// multiple of delta the last step is the shorter remainder.
struct TimeGrid {
  std::vector<double> times;
  bool partial_last = false;
};

TimeGrid time_grid(double delta, double T) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("step must be > 0");
  if (!(T >= delta) || !std::isfinite(T)) throw InvalidArgument("horizon must be >= step");
  const double q = T / delta;
  if (q > 2e6) throw InvalidArgument("more than 2e6 steps requested; increase the step");

  TimeGrid grid;
  const auto n_round = static_cast<long long>(std::llround(q));
  if (n_round >= 1 && std::abs(static_cast<double>(n_round) * delta - T) <= 1e-9 * std::max(1.0, T)) {
    grid.times.reserve(static_cast<std::size_t>(n_round) + 1);
    for (long long k = 0; k < n_round; ++k)
      grid.times.push_back(static_cast<double>(k) * delta);
    grid.times.push_back(T);
  } else {
    const auto n_full = static_cast<long long>(std::floor(q));
    grid.times.reserve(static_cast<std::size_t>(n_full) + 2);
    for (long long k = 0; k <= n_full; ++k)
      grid.times.push_back(static_cast<double>(k) * delta);
    grid.times.push_back(T);
    grid.partial_last = true;
  }
  return grid;
}

Vec3 rk4_step(const SineParams& p, const Vec3& s, double h) {
  const auto f = [&p](const Vec3& v) { return vector_field(p, from_vec(v)); };
  const Vec3 k1 = f(s);
  const Vec3 k2 = f(s + (0.5 * h) * k1);
  const Vec3 k3 = f(s + (0.5 * h) * k2);
  const Vec3 k4 = f(s + h * k3);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat4 augmented(const AffineSystem& sys, double delta) {
  Mat4 a;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) a[i][j] = sys.M[i][j] * delta;
    a[i][3] = sys.b[i] * delta;
  }
  return a;
}

// Homogeneous form of an affine map: top-left 3x3 is the linear part,
// last column the offset, bottom row (0 0 0 1) exactly.
struct AffineMap {
  Mat3 phi = Mat3::identity();
  Vec3 psi;
};

AffineMap from_homogeneous(const Mat4& h) {
  AffineMap m;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m.phi[i][j] = h[i][j];
    m.psi[i] = h[i][3];
  }
  return m;
}

void check_box(const StateBox& box) {
  for (const Interval& iv : {box.x, box.y, box.t}) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
      throw InvalidArgument("initial box intervals must be finite with lo <= hi");
  }
}

}  // namespace

StateVector analytic_state(const SineParams& p, double t) {
  const double arg = p.omega * t + p.phase;
  StateVector s;
  s.x = -(p.amplitude / p.omega) * std::cos(arg) + p.bias * t;
  s.y = p.amplitude * std::sin(arg) + p.bias;
  s.t = t;
  return s;
}

Vec3 vector_field(const SineParams& p, const StateVector& s) {
  return {{s.y, -p.omega * p.omega * (s.x - p.bias * s.t), 1.0}};
}

AffineSystem affine_system(const SineParams& p) {
  AffineSystem sys;
  sys.M[0][1] = 1.0;
  sys.M[1][0] = -p.omega * p.omega;
  sys.M[1][2] = p.omega * p.omega * p.bias;
  sys.b = {{0.0, 0.0, 1.0}};
  return sys;
}

StepMap step_map(const AffineSystem& sys, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("step must be > 0");
  const double scaled = norm_inf(sys.M) * delta;
  if (scaled > 16.0)
    throw StepTooLargeError("|M*delta|_inf = " + format_double(scaled) +
                            " exceeds 16; shrink the step");
  const AffineMap m = from_homogeneous(expm(augmented(sys, delta)));
  return {m.phi, m.psi};
}

Trajectory simulate(const SineParams& p, const StateVector& init, double delta, double T) {
  if (!finite(to_vec(init))) throw InvalidArgument("initial state must be finite");
  const TimeGrid grid = time_grid(delta, T);
  Trajectory tr;
  tr.method = TrajectoryMethod::rk4;
  tr.samples.reserve(grid.times.size());
  tr.samples.push_back({0.0, init});
  Vec3 s = to_vec(init);
  for (std::size_t k = 1; k < grid.times.size(); ++k) {
    s = rk4_step(p, s, grid.times[k] - grid.times[k - 1]);
    if (!finite(s))
      throw NonFiniteError("integration diverged at t = " + format_double(grid.times[k]));
    tr.samples.push_back({grid.times[k], from_vec(s)});
  }
  return tr;
}

Trajectory analytic_trajectory(const SineParams& p, double delta, double T) {
  const TimeGrid grid = time_grid(delta, T);
  Trajectory tr;
  tr.method = TrajectoryMethod::analytic;
  tr.samples.reserve(grid.times.size());
  for (double t : grid.times) tr.samples.push_back({t, analytic_state(p, t)});
  return tr;
}

Parallelotope box_parallelotope(const StateBox& box) {
  Parallelotope par;
  par.center = {{box.x.center(), box.y.center(), box.t.center()}};
  par.generators = Mat3::diag(box.x.radius(), box.y.radius(), box.t.radius());
  par.bloat = 0.0;
  return par;
}

Flowpipe flowpipe(const StateBox& init, const SineParams& p, double delta, double T) {
  check_box(init);
  const TimeGrid grid = time_grid(delta, T);
  const std::size_t n_times = grid.times.size();
  const AffineSystem sys = affine_system(p);
  const double m_norm = norm_inf(sys.M);
  const double b_norm = norm_inf(sys.b);

  // Exact affine image of the initial set at every grid time, computed from
  // cached binary powers of the one-step map. Propagating the map instead of
  // the set avoids the wrapping effect entirely.
  if (m_norm * delta > 16.0)
    throw StepTooLargeError("|M*delta|_inf = " + format_double(m_norm * delta) +
                            " exceeds 16; shrink the step");
  const Mat4 h_step = expm(augmented(sys, delta));
  std::vector<Mat4> pow2{h_step};
  const std::size_t n_uniform = n_times - 1 - (grid.partial_last ? 1 : 0);
  while ((std::size_t{1} << pow2.size()) <= n_uniform)
    pow2.push_back(pow2.back() * pow2.back());
  const auto h_at = [&pow2](std::size_t k) {
    Mat4 r = Mat4::identity();
    for (std::size_t j = 0; k >> j; ++j)
      if ((k >> j) & 1) r = pow2[j] * r;
    return r;
  };

  const Parallelotope init_par = box_parallelotope(init);
  std::vector<Parallelotope> sets(n_times);
  for (std::size_t k = 0; k <= n_uniform; ++k) {
    const AffineMap m = from_homogeneous(h_at(k));
    sets[k].center = m.phi * init_par.center + m.psi;
    sets[k].generators = m.phi * init_par.generators;
  }
  if (grid.partial_last) {
    const double h_last = grid.times[n_times - 1] - grid.times[n_times - 2];
    const StepMap sm = step_map(sys, h_last);
    const Parallelotope& prev = sets[n_times - 2];
    sets[n_times - 1].center = sm.phi * prev.center + sm.psi;
    sets[n_times - 1].generators = sm.phi * prev.generators;
  }

  Flowpipe fp;
  fp.step = delta;
  fp.horizon = T;
  fp.segments.reserve(n_times - 1);
  for (std::size_t k = 0; k + 1 < n_times; ++k) {
    const Parallelotope& a = sets[k];
    const Parallelotope& b = sets[k + 1];
    const double h = grid.times[k + 1] - grid.times[k];

    // Midpoint hull of the two exact sets; the hull radius covers the
    // distance from either set to the midpoint representation.
    const double hull_r = 0.5 * norm_inf(b.center - a.center) +
                          0.5 * norm_inf(b.generators - a.generators);
    const double reach_bound =
        std::max(norm_inf(a.center) + norm_inf(a.generators),
                 norm_inf(b.center) + norm_inf(b.generators));
    // Taylor remainder of the flow over one step, covering every solution
    // between the sampled endpoints.
    const double alpha = (std::expm1(m_norm * h) - m_norm * h) *
                         (reach_bound + b_norm / std::max(m_norm, 1.0));

    FlowpipeSegment seg;
    seg.t_begin = grid.times[k];
    seg.t_end = grid.times[k + 1];
    seg.set.center = 0.5 * (a.center + b.center);
    seg.set.generators = 0.5 * (a.generators + b.generators);
    seg.set.bloat = hull_r + alpha;
    if (!finite(seg.set.center) || !std::isfinite(seg.set.bloat))
      throw NonFiniteError("flowpipe diverged at t = " + format_double(seg.t_begin));
    fp.segments.push_back(seg);
  }
  return fp;
}

namespace {

struct SegmentTest {
  bool fallback = false;
  Mat3 ginv;
  double allowed = 1.0;
};

// Dimensionless slack of one state in one segment; >= 0 means inside.
double segment_margin(const FlowpipeSegment& seg, const SegmentTest& test, const Vec3& s) {
  const Vec3 d = s - seg.set.center;
  if (!test.fallback) {
    const Vec3 alpha = test.ginv * d;
    return test.allowed - norm_inf(alpha);
  }
  double worst = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double width = row_abs_sum(seg.set.generators, i) + seg.set.bloat;
    double ratio;
    if (width > 0.0)
      ratio = std::abs(d[i]) / width;
    else
      ratio = d[i] == 0.0 ? 0.0 : kInf;
    worst = std::min(worst, 1.0 - ratio);
  }
  return worst;
}

}  // namespace

ContainmentReport check_containment(const Flowpipe& fp, const Trajectory& tr) {
  if (fp.segments.empty()) throw InvalidArgument("flowpipe has no segments");
  ContainmentReport rep;
  rep.margin = kInf;
  if (tr.samples.empty()) return rep;

  std::vector<SegmentTest> tests(fp.segments.size());
  for (std::size_t k = 0; k < fp.segments.size(); ++k) {
    const Mat3& g = fp.segments[k].set.generators;
    const auto inv = inverse(g);
    if (!inv || norm_inf(g) * norm_inf(*inv) > 1e12) {
      tests[k].fallback = true;
      rep.fallback_segments.push_back(k);
    } else {
      tests[k].ginv = *inv;
      tests[k].allowed = 1.0 + fp.segments[k].set.bloat * norm_inf(*inv);
    }
  }

  const double tol = 1e-9 * std::max(1.0, fp.horizon);
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const TrajectorySample& sample = tr.samples[i];
    if (sample.time < -tol || sample.time > fp.horizon + tol)
      throw InvalidArgument("trajectory sample at t = " + format_double(sample.time) +
                            " lies outside the flowpipe horizon");
    const Vec3 s = to_vec(sample.state);

    // Segments tile the horizon; a sample on a grid point belongs to both
    // neighbors and counts as inside if either accepts it.
    auto it = std::lower_bound(fp.segments.begin(), fp.segments.end(), sample.time - tol,
                               [](const FlowpipeSegment& seg, double t) { return seg.t_end < t; });
    double best = -kInf;
    std::ptrdiff_t best_idx = -1;
    for (; it != fp.segments.end() && it->t_begin <= sample.time + tol; ++it) {
      const auto k = static_cast<std::size_t>(it - fp.segments.begin());
      const double m = segment_margin(*it, tests[k], s);
      if (m > best) {
        best = m;
        best_idx = static_cast<std::ptrdiff_t>(k);
      }
    }
    rep.margin = std::min(rep.margin, best);
    if (!(best >= 0.0))
      rep.violations.push_back({i, sample.time, sample.state, best_idx});
  }
  rep.contained = rep.violations.empty();
  return rep;
}

double conservation_residual(const SineParams& p, const StateVector& s) {
  const double v = s.y - p.bias;
  const double u = s.x - p.bias * s.t;
  return std::abs(v * v + p.omega * p.omega * u * u - p.amplitude * p.amplitude);
}

namespace {

Polygon zonotope_polygon(Point2 center, std::vector<Point2> gens) {
  if (gens.empty()) return Polygon{{center}};
  // Flip every generator into the upper half-plane (the set is symmetric),
  // then walk the boundary in angular order.
  for (Point2& g : gens)
    if (g.y < 0.0 || (g.y == 0.0 && g.x < 0.0)) {
      g.x = -g.x;
      g.y = -g.y;
    }
  std::sort(gens.begin(), gens.end(), [](const Point2& a, const Point2& b) {
    const double aa = std::atan2(a.y, a.x);
    const double ab = std::atan2(b.y, b.x);
    if (aa != ab) return aa < ab;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  Point2 v = center;
  for (const Point2& g : gens) {
    v.x -= g.x;
    v.y -= g.y;
  }
  Polygon poly;
  poly.vertices.reserve(2 * gens.size());
  poly.vertices.push_back(v);
  for (const Point2& g : gens) {
    v.x += 2.0 * g.x;
    v.y += 2.0 * g.y;
    poly.vertices.push_back(v);
  }
  for (std::size_t j = 0; j + 1 < gens.size(); ++j) {
    v.x -= 2.0 * gens[j].x;
    v.y -= 2.0 * gens[j].y;
    poly.vertices.push_back(v);
  }
  return poly;
}

}  // namespace

std::vector<Polygon> project_flowpipe(const Flowpipe& fp, Dim d0, Dim d1) {
  if (d0 == d1) throw InvalidArgument("projection dims must be distinct");
  const auto i0 = static_cast<std::size_t>(d0);
  const auto i1 = static_cast<std::size_t>(d1);
  std::vector<Polygon> polys;
  polys.reserve(fp.segments.size());
  for (const FlowpipeSegment& seg : fp.segments) {
    const Parallelotope& par = seg.set;
    std::vector<Point2> gens;
    gens.reserve(5);
    for (std::size_t j = 0; j < 3; ++j) {
      const Point2 g{par.generators[i0][j], par.generators[i1][j]};
      if (g.x != 0.0 || g.y != 0.0) gens.push_back(g);
    }
    if (par.bloat > 0.0) {
      gens.push_back({par.bloat, 0.0});
      gens.push_back({0.0, par.bloat});
    }
    polys.push_back(zonotope_polygon({par.center[i0], par.center[i1]}, std::move(gens)));
  }
  return polys;
}

Interval parallelotope_extent(const Parallelotope& par, Dim d) {
  const auto i = static_cast<std::size_t>(d);
  const double r = row_abs_sum(par.generators, i) + par.bloat;
  return {par.center[i] - r, par.center[i] + r};
}

Interval flowpipe_extent(const Flowpipe& fp, Dim d) {
  if (fp.segments.empty()) throw InvalidArgument("flowpipe has no segments");
  Interval out{kInf, -kInf};
  for (const FlowpipeSegment& seg : fp.segments) {
    const Interval e = parallelotope_extent(seg.set, d);
    out.lo = std::min(out.lo, e.lo);
    out.hi = std::max(out.hi, e.hi);
  }
  return out;
}

}  // namespace sinex
