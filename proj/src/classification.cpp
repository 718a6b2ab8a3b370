#include "islandap/classification.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <thread>

#include "islandap/error.hpp"

namespace islandap {

namespace {

bool near_any(Vec2 p, const std::vector<Vec2>& pts, double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](Vec2 q) { return distance(p, q) <= tol; });
}

struct NodeOutcome {
  NodeTag tag = NodeTag::OpenInterior;
  bool has_line = false;
  FieldLine line;
};

NodeOutcome classify_one(const Grid& grid, const ProblemCase& problem, std::size_t idx,
                         const TracerParams& params, double step, double closure) {
  const NodeIndex n = grid.node(idx);
  NodeOutcome out;
  if (grid.is_boundary(n)) {
    out.tag = NodeTag::Boundary;
    return out;
  }
  const Vec2 p = grid.point(n);
  const double tol = 1e-9 * std::min(grid.hx(), grid.hy());
  if (near_any(p, problem.field.singular_points, tol)) {
    out.tag = near_any(p, problem.island_centers, tol) ? NodeTag::ClosedInterior
                                                       : NodeTag::OpenInterior;
    return out;
  }
  const bool on_cut_ray = std::any_of(problem.cut_rays.begin(), problem.cut_rays.end(),
                                      [&](const CutRay& r) { return r.contains(p, tol); });
  try {
    if (on_cut_ray) {
      FieldLine line = params.cut_method == TraceMethod::One
                           ? trace_method_one(p, problem.field, step, closure, grid)
                           : trace_method_two(p, problem.field, step, closure, grid);
      if (line.kind == LineKind::Closed) {
        out.tag = NodeTag::Cut;
        out.has_line = true;
        out.line = std::move(line);
      } else {
        out.tag = NodeTag::OpenInterior;
      }
      return out;
    }
    const FieldLine line = trace_method_two(p, problem.field, step, closure, grid);
    out.tag = line.kind == LineKind::Closed ? NodeTag::ClosedInterior : NodeTag::OpenInterior;
    return out;
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "classification failed at node (" << n.i << ", " << n.j << "): " << e.what();
    throw Error(ErrorKind::Classification, msg.str());
  }
}

}  // namespace

const char* to_string(NodeTag tag) {
  switch (tag) {
    case NodeTag::Boundary: return "boundary";
    case NodeTag::OpenInterior: return "open";
    case NodeTag::ClosedInterior: return "closed";
    case NodeTag::Cut: return "cut";
  }
  return "unknown";
}

std::size_t NodeClassification::count(NodeTag tag) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag));
}

const CutLine* NodeClassification::cut_line(std::size_t node) const {
  auto it = std::lower_bound(cut_lines.begin(), cut_lines.end(), node,
                             [](const CutLine& c, std::size_t n) { return c.node < n; });
  return (it != cut_lines.end() && it->node == node) ? &*it : nullptr;
}

NodeClassification classify_nodes(const Grid& grid, const ProblemCase& problem,
                                  const TracerParams& params) {
  if (!(params.step_factor > 0.0) || !(params.closure_factor > 0.0))
    throw Error(ErrorKind::InvalidConfig, "tracer step and closure factors must be positive");

  const double h = std::min(grid.hx(), grid.hy());
  const double step = params.step_factor * h;
  const double closure = params.closure_factor * h;
  const std::size_t n = grid.node_count();

  std::vector<NodeOutcome> outcomes(n);
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 64);
  // First failure per worker; the lowest failing node index is reported.
  std::vector<std::pair<std::size_t, std::exception_ptr>> errors(workers, {n, nullptr});
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        std::size_t idx = w;
        try {
          for (; idx < n; idx += workers)
            outcomes[idx] = classify_one(grid, problem, idx, params, step, closure);
        } catch (...) {
          errors[w] = {idx, std::current_exception()};
        }
      });
    }
  }
  const auto first = std::min_element(errors.begin(), errors.end(),
                                      [](const auto& a, const auto& b) { return a.first < b.first; });
  if (first->second) std::rethrow_exception(first->second);

  NodeClassification result;
  result.cut_method = params.cut_method;
  result.step = step;
  result.closure_radius = closure;
  result.tags.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    result.tags.push_back(outcomes[idx].tag);
    if (outcomes[idx].has_line) result.cut_lines.push_back({idx, std::move(outcomes[idx].line)});
  }
  return result;
}

}  // namespace islandap
