#pragma once

#include <cstddef>
#include <vector>

#include "islandap/field_model.hpp"
#include "islandap/grid.hpp"
#include "islandap/tracer.hpp"

namespace islandap {

enum class NodeTag { Boundary, OpenInterior, ClosedInterior, Cut };

const char* to_string(NodeTag tag);

struct TracerParams {
  double step_factor = 0.25;     // RK4 step = step_factor * min(hx, hy)
  double closure_factor = 1.0;   // closure radius = closure_factor * min(hx, hy)
  TraceMethod cut_method = TraceMethod::Two;
};

/// The closed field line owned by a cut node.
struct CutLine {
  std::size_t node = 0;
  FieldLine line;
};

struct NodeClassification {
  std::vector<NodeTag> tags;       // indexed like Grid::index
  std::vector<CutLine> cut_lines;  // ascending node index
  TraceMethod cut_method = TraceMethod::Two;
  double step = 0.0;
  double closure_radius = 0.0;

  std::size_t count(NodeTag tag) const;
  const CutLine* cut_line(std::size_t node) const;
};

/// Tags every node. Nodes on a cut ray are traced with `params.cut_method` and become Cut
/// when their line closes; every other interior node is traced with Method Two.
/// Nodes at singular points are not traced: island centers are ClosedInterior, other
/// singular points OpenInterior. A runaway trace throws ErrorKind::Classification.
NodeClassification classify_nodes(const Grid& grid, const ProblemCase& problem,
                                  const TracerParams& params = {});

}  // namespace islandap
