#pragma once

#include <cstddef>
#include <vector>

#include "sinex/linalg.hpp"
#include "sinex/sine_builder.hpp"
#include "sinex/sx_io.hpp"

namespace sinex {

struct StateVector {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;

  friend bool operator==(const StateVector&, const StateVector&) = default;
};

inline Vec3 to_vec(const StateVector& s) { return {{s.x, s.y, s.t}}; }
inline StateVector from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }

enum class Dim { x = 0, y = 1, t = 2 };

// s' = M s + b with state order (x, y, t).
struct AffineSystem {
  Mat3 M;
  Vec3 b;
};

enum class TrajectoryMethod { analytic, rk4 };

struct TrajectorySample {
  double time = 0.0;
  StateVector state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TrajectoryMethod method = TrajectoryMethod::rk4;
};

// The set {center + G a + e : a in [-1,1]^3, |e|_inf <= bloat}.
struct Parallelotope {
  Vec3 center;
  Mat3 generators;
  double bloat = 0.0;
};

struct FlowpipeSegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  Parallelotope set;
};

struct Flowpipe {
  std::vector<FlowpipeSegment> segments;
  double step = 0.0;
  double horizon = 0.0;
};

struct Violation {
  std::size_t sample_index = 0;
  double time = 0.0;
  StateVector state;
  // Closest candidate segment; -1 when no segment covers the sample time.
  std::ptrdiff_t segment_index = -1;
};

struct ContainmentReport {
  bool contained = true;
  std::vector<Violation> violations;
  double margin = 0.0;  // min over samples of (allowed - needed); +inf when no samples
  // Segments whose generator matrix was numerically singular, tested via
  // their interval hull instead of the parallelotope solve.
  std::vector<std::size_t> fallback_segments;
};

/// Closed form for the signal's own trajectory:
/// y(t) = A sin(wt + phi) + mu, x(t) = -(A/w) cos(wt + phi) + mu t.
StateVector analytic_state(const SineParams& p, double t);

/// (x', y', t') = (y, -w^2 (x - mu t), 1).
Vec3 vector_field(const SineParams& p, const StateVector& s);

AffineSystem affine_system(const SineParams& p);

struct StepMap {
  Mat3 phi;
  Vec3 psi;
};

/// Exact discretization s(t + delta) = phi s(t) + psi via the augmented 4x4
/// matrix exponential. Throws StepTooLargeError when |M delta|_inf > 16.
StepMap step_map(const AffineSystem& sys, double delta);

/// Classical fixed-step RK4. Samples at 0, delta, 2 delta, ...; a final
/// partial step lands exactly on T. Throws NonFiniteError if the state
/// leaves the representable range.
Trajectory simulate(const SineParams& p, const StateVector& init, double delta, double T);

/// The analytic solution sampled on the same grid simulate uses.
Trajectory analytic_trajectory(const SineParams& p, double delta, double T);

/// Sound over-approximation of every solution starting in init.
/// Each X(t_k) is the exact affine image of the initial box (fresh
/// propagation by cached powers of the one-step map; no wrapping); segment k
/// is a parallelotope hull of X(t_k), X(t_k+1) bloated to cover intra-step
/// behavior.
Flowpipe flowpipe(const StateBox& init, const SineParams& p, double delta, double T);

/// Membership of every trajectory sample in a time-matching segment.
/// Segments with singular generators fall back to an interval-hull test and
/// are flagged in the report.
ContainmentReport check_containment(const Flowpipe& fp, const Trajectory& tr);

/// |(y - mu)^2 + w^2 (x - mu t)^2 - A^2|, zero along exact solutions.
double conservation_residual(const SineParams& p, const StateVector& s);

/// 2-D shadow of each segment (a zonotope) as a convex polygon.
std::vector<Polygon> project_flowpipe(const Flowpipe& fp, Dim d0, Dim d1);

/// Axis-aligned extent of one parallelotope / of a whole flowpipe.
Interval parallelotope_extent(const Parallelotope& par, Dim d);
Interval flowpipe_extent(const Flowpipe& fp, Dim d);

/// Initial box as a parallelotope (diagonal generators, zero bloat).
Parallelotope box_parallelotope(const StateBox& box);

}  // namespace sinex
