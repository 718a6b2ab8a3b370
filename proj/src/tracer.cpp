#include "islandap/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "islandap/error.hpp"

namespace islandap {

namespace {

Vec2 clip_to_boundary(Vec2 inside, Vec2 outside, const Grid& grid) {
  const double a = grid.half_width();
  const double b = grid.half_height();
  const Vec2 d = outside - inside;
  double t = 1.0;
  if (outside.x > a) t = std::min(t, (a - inside.x) / d.x);
  if (outside.x < -a) t = std::min(t, (-a - inside.x) / d.x);
  if (outside.y > b) t = std::min(t, (b - inside.y) / d.y);
  if (outside.y < -b) t = std::min(t, (-b - inside.y) / d.y);
  Vec2 p = inside + t * d;
  p.x = std::clamp(p.x, -a, a);
  p.y = std::clamp(p.y, -b, b);
  return p;
}

[[noreturn]] void runaway(const char* what, Vec2 start, std::size_t max_steps) {
  std::ostringstream msg;
  msg << what << " from (" << start.x << ", " << start.y << ") exceeded " << max_steps
      << " steps";
  throw Error(ErrorKind::TraceFailure, msg.str());
}

// Follows one branch until it leaves the domain; the clipped exit point is appended.
std::vector<Vec2> open_branch(Vec2 start, const FieldSpec& field, double step, double dir,
                              const Grid& grid, std::size_t max_steps) {
  std::vector<Vec2> pts;
  Vec2 p = start;
  for (std::size_t n = 0; n < max_steps; ++n) {
    const Vec2 next = rk4_step(field, p, step, dir);
    if (!grid.contains(next)) {
      pts.push_back(clip_to_boundary(p, next, grid));
      return pts;
    }
    pts.push_back(next);
    p = next;
  }
  runaway("open trace", start, max_steps);
}

}  // namespace

const char* to_string(TraceMethod method) {
  switch (method) {
    case TraceMethod::OpenTrace: return "open";
    case TraceMethod::One: return "one";
    case TraceMethod::Two: return "two";
  }
  return "unknown";
}

std::size_t default_max_steps(const Grid& grid, double step) {
  return static_cast<std::size_t>(std::ceil(100.0 * grid.perimeter() / step));
}

Vec2 rk4_step(const FieldSpec& field, Vec2 p, double step, double direction) {
  const double h = step * direction;
  const Vec2 k1 = field.direction(p);
  const Vec2 k2 = field.direction(p + (0.5 * h) * k1);
  const Vec2 k3 = field.direction(p + (0.5 * h) * k2);
  const Vec2 k4 = field.direction(p + h * k3);
  return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

FieldLine trace_open(Vec2 start, const FieldSpec& field, double step, const Grid& grid,
                     std::size_t max_steps) {
  if (max_steps == 0) max_steps = default_max_steps(grid, step);
  FieldLine line;
  line.kind = LineKind::Open;
  line.method = TraceMethod::OpenTrace;
  line.start = start;
  line.step = step;
  if (!grid.contains(start)) {
    line.points = {start};
    return line;
  }
  std::vector<Vec2> back = open_branch(start, field, step, -1.0, grid, max_steps);
  std::vector<Vec2> fwd = open_branch(start, field, step, +1.0, grid, max_steps);
  line.points.reserve(back.size() + fwd.size() + 1);
  line.points.assign(back.rbegin(), back.rend());
  line.points.push_back(start);
  line.points.insert(line.points.end(), fwd.begin(), fwd.end());
  return line;
}

FieldLine trace_method_one(Vec2 start, const FieldSpec& field, double step,
                           double closure_radius, const Grid& grid, std::size_t max_steps) {
  if (max_steps == 0) max_steps = default_max_steps(grid, step);
  FieldLine line;
  line.method = TraceMethod::One;
  line.start = start;
  line.step = step;
  line.points.push_back(start);

  bool left = false;
  double prev_dist = 0.0;
  Vec2 p = start;
  for (std::size_t n = 0; n < max_steps; ++n) {
    const Vec2 next = rk4_step(field, p, step, +1.0);
    if (!grid.contains(next)) {
      line.points.push_back(clip_to_boundary(p, next, grid));
      line.kind = LineKind::Open;
      return line;
    }
    line.points.push_back(next);
    const double dist = distance(next, start);
    if (left && dist <= closure_radius) {
      line.kind = LineKind::Closed;
      return line;
    }
    if (dist > 2.0 * closure_radius || (dist > closure_radius && dist < prev_dist)) left = true;
    prev_dist = dist;
    p = next;
  }
  runaway("method one trace", start, max_steps);
}

FieldLine trace_method_two(Vec2 start, const FieldSpec& field, double step,
                           double closure_radius, const Grid& grid, std::size_t max_steps) {
  if (max_steps == 0) max_steps = default_max_steps(grid, step);
  std::vector<Vec2> fwd{start};
  std::vector<Vec2> bwd{start};
  std::vector<double> gap{0.0};
  bool separated = false;

  FieldLine line;
  line.method = TraceMethod::Two;
  line.start = start;
  line.step = step;

  auto finish_closed = [&](std::size_t k) {
    line.kind = LineKind::Closed;
    line.points.assign(fwd.begin(), fwd.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    for (std::size_t m = k + 1; m-- > 0;) line.points.push_back(bwd[m]);
    // Both ends are the start point itself, not a recomputed copy.
    line.points.front() = start;
    line.points.back() = start;
    return line;
  };

  for (std::size_t k = 1; k <= max_steps; ++k) {
    const Vec2 pf = rk4_step(field, fwd.back(), step, +1.0);
    const Vec2 pb = rk4_step(field, bwd.back(), step, -1.0);
    const bool fwd_out = !grid.contains(pf);
    const bool bwd_out = !grid.contains(pb);
    if (fwd_out || bwd_out) {
      line.kind = LineKind::Open;
      line.points.assign(bwd.rbegin(), bwd.rend());
      if (bwd_out) line.points.insert(line.points.begin(), clip_to_boundary(bwd.back(), pb, grid));
      line.points.insert(line.points.end(), fwd.begin() + 1, fwd.end());
      if (fwd_out) line.points.push_back(clip_to_boundary(fwd.back(), pf, grid));
      return line;
    }
    fwd.push_back(pf);
    bwd.push_back(pb);
    gap.push_back(distance(pf, pb));

    if (separated && gap[k] <= closure_radius) return finish_closed(k);
    // Strict local minimum of the gap at k - 1 (one step of lookahead).
    if (k >= 2 && gap[k - 1] < gap[k - 2] && gap[k - 1] < gap[k]) return finish_closed(k - 1);
    if (gap[k] > closure_radius || gap[k] < gap[k - 1]) separated = true;
  }
  runaway("method two trace", start, max_steps);
}

double line_length(const FieldLine& line) {
  double len = 0.0;
  for (std::size_t k = 1; k < line.points.size(); ++k)
    len += distance(line.points[k - 1], line.points[k]);
  return len;
}

}  // namespace islandap
