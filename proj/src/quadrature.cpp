#include "islandap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "islandap/error.hpp"

namespace islandap {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr double kSideOffset = 1e-10;

int snap_index(double coord, double h) {
  const double xi = coord / h;
  const double r = std::round(xi);
  return std::abs(xi - r) < 1e-9 ? static_cast<int>(r) : kNoLine;
}

bool is_end(PointKind k) { return k == PointKind::CutNode || k == PointKind::Endpoint; }

// Folds `from` into `into`; ends keep their kind, anything else becomes a jump point.
void merge_into(QuadraturePoint& into, const QuadraturePoint& from) {
  if (into.column == kNoLine) into.column = from.column;
  if (into.row == kNoLine) into.row = from.row;
  into.jump = into.jump || from.jump;
  if (is_end(from.kind)) {
    into.kind = from.kind;
    into.p = from.p;
  } else if (from.kind == PointKind::Discontinuity && !is_end(into.kind)) {
    into.kind = PointKind::Discontinuity;
  }
}

void append_dedup(std::vector<QuadraturePoint>& out, const QuadraturePoint& q) {
  if (!out.empty() && distance(out.back().p, q.p) < kMergeTol) {
    merge_into(out.back(), q);
    return;
  }
  out.push_back(q);
}

QuadraturePoint node_point(Vec2 p, PointKind kind, double param, const Grid& grid) {
  QuadraturePoint q;
  q.p = p;
  q.kind = kind;
  q.param = param;
  q.column = snap_index(p.x, grid.hx());
  q.row = snap_index(p.y, grid.hy());
  return q;
}

// Crossings of segment P -> Q with grid lines, parameter t in (0, 1], sorted by t.
std::vector<std::pair<double, QuadraturePoint>> segment_crossings(Vec2 P, Vec2 Q, std::size_t seg,
                                                                   const Grid& grid) {
  std::vector<std::pair<double, QuadraturePoint>> hits;
  const Vec2 d = Q - P;
  if (d.x != 0.0) {
    const double hx = grid.hx();
    const int lo = static_cast<int>(std::ceil(std::min(P.x, Q.x) / hx));
    const int hi = static_cast<int>(std::floor(std::max(P.x, Q.x) / hx));
    for (int i = lo; i <= hi; ++i) {
      const double x = i * hx;
      const double t = (x - P.x) / d.x;
      if (!(t > 0.0 && t <= 1.0)) continue;
      QuadraturePoint q;
      q.p = {x, P.y + t * d.y};
      q.kind = PointKind::VerticalEdge;
      q.param = static_cast<double>(seg) + t;
      q.column = i;
      q.row = snap_index(q.p.y, grid.hy());
      hits.emplace_back(t, q);
    }
  }
  if (d.y != 0.0) {
    const double hy = grid.hy();
    const int lo = static_cast<int>(std::ceil(std::min(P.y, Q.y) / hy));
    const int hi = static_cast<int>(std::floor(std::max(P.y, Q.y) / hy));
    for (int j = lo; j <= hi; ++j) {
      const double y = j * hy;
      const double t = (y - P.y) / d.y;
      if (!(t > 0.0 && t <= 1.0)) continue;
      QuadraturePoint q;
      q.p = {P.x + t * d.x, y};
      q.kind = PointKind::HorizontalEdge;
      q.param = static_cast<double>(seg) + t;
      q.row = j;
      q.column = snap_index(q.p.x, grid.hx());
      hits.emplace_back(t, q);
    }
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return hits;
}

Vec2 unit_or_zero(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? v * (1.0 / n) : Vec2{};
}

}  // namespace

const char* to_string(PointKind kind) {
  switch (kind) {
    case PointKind::CutNode: return "cut";
    case PointKind::HorizontalEdge: return "hedge";
    case PointKind::VerticalEdge: return "vedge";
    case PointKind::Discontinuity: return "jump";
    case PointKind::Endpoint: return "end";
  }
  return "unknown";
}

std::vector<QuadraturePoint> edge_intersections(const FieldLine& line, const Grid& grid) {
  if (line.kind != LineKind::Closed || line.points.size() < 2)
    throw Error(ErrorKind::Assembly, "quadrature requires a closed field line");
  const auto& pts = line.points;
  const std::size_t nseg = pts.size() - 1;

  std::vector<QuadraturePoint> out;
  out.push_back(node_point(pts.front(), PointKind::CutNode, 0.0, grid));
  for (std::size_t s = 0; s < nseg; ++s) {
    for (const auto& [t, q] : segment_crossings(pts[s], pts[s + 1], s, grid)) {
      if (s + 1 == nseg && t >= 1.0) continue;  // the line end is appended below
      append_dedup(out, q);
    }
  }
  const PointKind end_kind =
      pts.back() == pts.front() ? PointKind::CutNode : PointKind::Endpoint;
  append_dedup(out, node_point(pts.back(), end_kind, static_cast<double>(nseg), grid));
  if (out.size() < 2) throw Error(ErrorKind::Assembly, "degenerate closed line");
  return out;
}

std::vector<QuadraturePoint> insert_discontinuities(std::vector<QuadraturePoint> points,
                                                    const FieldLine& line,
                                                    const std::vector<Ray>& rays) {
  if (rays.empty()) return points;
  const auto& pts = line.points;
  std::vector<QuadraturePoint> jumps;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const Vec2 P = pts[s];
    const Vec2 D = pts[s + 1] - P;
    for (const Ray& r : rays) {
      const double denom = cross(D, r.direction);
      if (denom == 0.0) continue;
      const double t = cross(r.origin - P, r.direction) / denom;
      const double u = cross(r.origin - P, D) / denom;
      if (!(t > 0.0 && t <= 1.0) || !(u * norm(r.direction) > kMergeTol)) continue;
      QuadraturePoint q;
      q.p = P + t * D;
      q.kind = PointKind::Discontinuity;
      q.jump = true;
      q.param = static_cast<double>(s) + t;
      jumps.push_back(q);
    }
  }
  std::sort(jumps.begin(), jumps.end(),
            [](const auto& a, const auto& b) { return a.param < b.param; });

  std::vector<QuadraturePoint> merged;
  merged.reserve(points.size() + jumps.size());
  std::size_t k = 0;
  for (const QuadraturePoint& q : points) {
    while (k < jumps.size() && jumps[k].param < q.param) {
      if (!merged.empty() && distance(merged.back().p, jumps[k].p) < kMergeTol)
        merge_into(merged.back(), jumps[k]);
      else
        merged.push_back(jumps[k]);
      ++k;
    }
    if (!merged.empty() && distance(merged.back().p, q.p) < kMergeTol) {
      QuadraturePoint combined = q;
      merge_into(combined, merged.back());
      merged.back() = combined;
    } else {
      merged.push_back(q);
    }
  }
  // Crossings past the final point coincide with it (t <= 1 on the last segment).
  for (; k < jumps.size(); ++k) {
    if (distance(merged.back().p, jumps[k].p) < kMergeTol) merge_into(merged.back(), jumps[k]);
  }
  return merged;
}

void sample_divergence(std::vector<QuadraturePoint>& points, const FieldSpec& field) {
  const std::size_t n = points.size();
  for (std::size_t k = 0; k < n; ++k) {
    QuadraturePoint& q = points[k];
    if (!q.jump) {
      q.div_before = q.div_after = field.divergence(q.p);
      continue;
    }
    const Vec2 t_in = k > 0 ? unit_or_zero(q.p - points[k - 1].p) : Vec2{};
    const Vec2 t_out = k + 1 < n ? unit_or_zero(points[k + 1].p - q.p) : Vec2{};
    q.div_before = field.divergence(q.p - kSideOffset * t_in);
    q.div_after = field.divergence(q.p + kSideOffset * t_out);
  }
}

std::vector<double> segment_weights(const std::vector<QuadraturePoint>& points) {
  std::vector<double> w;
  if (points.size() < 2) return w;
  w.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    w.push_back(distance(points[i].p, points[i + 1].p));
  return w;
}

std::vector<double> divergence_panels(const std::vector<QuadraturePoint>& points,
                                      const std::vector<double>& weights) {
  std::vector<double> panels(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    panels[i] = 0.5 * weights[i] * (points[i].div_after + points[i + 1].div_before);
  return panels;
}

std::vector<double> compute_E(const std::vector<QuadraturePoint>& points,
                              const std::vector<double>& weights, EFactorForm form) {
  const std::vector<double> panels = divergence_panels(points, weights);
  std::vector<double> prefix(points.size(), 0.0);
  for (std::size_t i = 0; i < panels.size(); ++i) prefix[i + 1] = prefix[i] + panels[i];
  const double total = prefix.back();
  std::vector<double> E(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    E[k] = std::exp(prefix[k]);
    if (form == EFactorForm::TwoSided) E[k] += std::exp(-(total - prefix[k]));
  }
  return E;
}

std::vector<HostWeight> host_weights(const QuadraturePoint& q, const Grid& grid) {
  const double a = grid.half_width();
  const double b = grid.half_height();
  if (std::abs(q.p.x) > a * (1.0 + 1e-12) || std::abs(q.p.y) > b * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "quadrature point (" << q.p.x << ", " << q.p.y << ") lies outside the domain";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }

  struct Axis {
    int idx[2];
    double w[2];
    int count;
  };
  auto axis = [](double coord, double h, int fixed, int limit) {
    Axis ax{};
    if (fixed != kNoLine) {
      ax.idx[0] = fixed;
      ax.w[0] = 1.0;
      ax.count = 1;
      return ax;
    }
    const double xi = coord / h;
    int i0 = static_cast<int>(std::floor(xi));
    i0 = std::clamp(i0, -limit, limit - 1);
    const double f = xi - i0;
    if (f <= 0.0) {
      ax = {{i0, 0}, {1.0, 0.0}, 1};
    } else if (f >= 1.0) {
      ax = {{i0 + 1, 0}, {1.0, 0.0}, 1};
    } else {
      ax = {{i0, i0 + 1}, {1.0 - f, f}, 2};
    }
    return ax;
  };
  const Axis ax = axis(q.p.x, grid.hx(), q.column, grid.I());
  const Axis ay = axis(q.p.y, grid.hy(), q.row, grid.J());

  std::vector<HostWeight> out;
  out.reserve(4);
  for (int jy = 0; jy < ay.count; ++jy)
    for (int ix = 0; ix < ax.count; ++ix)
      out.push_back({grid.index(ax.idx[ix], ay.idx[jy]), ax.w[ix] * ay.w[jy]});
  return out;
}

double loop_divergence_integral(const QuadratureSet& q) {
  const std::vector<double> panels = divergence_panels(q.points, q.weights);
  double total = 0.0;
  for (double p : panels) total += p;
  return total;
}

QuadratureSet build_quadrature_set(std::size_t cut_node, const FieldLine& line, const Grid& grid,
                                   const FieldSpec& field, EFactorForm form) {
  QuadratureSet q;
  q.cut_node = cut_node;
  q.points = insert_discontinuities(edge_intersections(line, grid), line,
                                    field.discontinuity_rays);
  sample_divergence(q.points, field);
  q.weights = segment_weights(q.points);
  q.E = compute_E(q.points, q.weights, form);
  q.hosts.reserve(q.points.size());
  for (const QuadraturePoint& p : q.points) q.hosts.push_back(host_weights(p, grid));
  return q;
}

}  // namespace islandap
