#pragma once

#include <cstddef>
#include <vector>

#include "islandap/field_model.hpp"
#include "islandap/geometry.hpp"
#include "islandap/grid.hpp"

namespace islandap {

enum class LineKind { Open, Closed };

/// OpenTrace: both directions until the boundary.
/// One: forward loop, stopped on return into the closure ball of the start.
/// Two: forward and backward traces in lock-step, stopped where they meet.
enum class TraceMethod { OpenTrace, One, Two };

const char* to_string(TraceMethod method);

/// Polyline approximation of a b-integral curve, ordered along +b.
/// A Method Two closed line starts and ends at `start` bitwise.
struct FieldLine {
  std::vector<Vec2> points;
  LineKind kind = LineKind::Open;
  TraceMethod method = TraceMethod::OpenTrace;
  Vec2 start;
  double step = 0.0;
};

/// 100 * perimeter / step.
std::size_t default_max_steps(const Grid& grid, double step);

/// One classical RK4 step along `direction` * b (direction is +1 or -1).
Vec2 rk4_step(const FieldSpec& field, Vec2 p, double step, double direction);

/// Extends the line through `start` along +b and -b until each branch leaves the domain;
/// the last point of each branch is clipped onto the boundary.
/// Throws ErrorKind::TraceFailure if either branch exceeds `max_steps` (0 = default).
FieldLine trace_open(Vec2 start, const FieldSpec& field, double step, const Grid& grid,
                     std::size_t max_steps = 0);

/// Forward-only loop. Closure is tested only after the trace has left the ball of
/// radius 2 * closure_radius around the start, or has turned back toward it from
/// outside the closure ball; the end point is not identified with the start.
FieldLine trace_method_one(Vec2 start, const FieldSpec& field, double step,
                           double closure_radius, const Grid& grid, std::size_t max_steps = 0);

/// Lock-step forward/backward traces p_k, q_k. Stops at the first k with
/// |p_k - q_k| <= closure_radius after separation, or at a strict local minimum of
/// |p_k - q_k|. Returns {p_0..p_k, q_k..q_0}; the gap p_k -> q_k is one segment.
/// A branch leaving the domain yields an Open line.
FieldLine trace_method_two(Vec2 start, const FieldSpec& field, double step,
                           double closure_radius, const Grid& grid, std::size_t max_steps = 0);

/// Sum of Euclidean segment lengths (0 for fewer than two points).
double line_length(const FieldLine& line);

}  // namespace islandap
