#pragma once

#include <climits>
#include <cstddef>
#include <vector>

#include "islandap/field_model.hpp"
#include "islandap/geometry.hpp"
#include "islandap/grid.hpp"
#include "islandap/tracer.hpp"

namespace islandap {

/// HorizontalEdge: on a grid line y = y_j between two nodes of that row.
/// VerticalEdge: on a grid line x = x_i. Endpoint: unidentified end of a Method One loop.
enum class PointKind { CutNode, HorizontalEdge, VerticalEdge, Discontinuity, Endpoint };

const char* to_string(PointKind kind);

inline constexpr int kNoLine = INT_MIN;

struct QuadraturePoint {
  Vec2 p;
  PointKind kind = PointKind::HorizontalEdge;
  double param = 0.0;      // polyline position: segment index + fraction
  int column = kNoLine;    // grid column i when p lies exactly on x = x_i
  int row = kNoLine;       // grid row j when p lies exactly on y = y_j
  bool jump = false;       // div b may jump here (Discontinuity, or merged with one)
  double div_before = 0.0; // div b on the incoming side
  double div_after = 0.0;  // div b on the outgoing side
};

struct HostWeight {
  std::size_t node = 0;
  double weight = 0.0;
};

/// Ordered quadrature points along one closed line, p_0 = cut node.
struct QuadratureSet {
  std::size_t cut_node = 0;
  std::vector<QuadraturePoint> points;
  std::vector<double> weights;  // weights[i] = |p_{i+1} - p_i|
  std::vector<double> E;
  std::vector<std::vector<HostWeight>> hosts;

  std::size_t size() const { return points.size(); }
};

/// Integrating-factor variant: the two-term discrete sum or the single exponential.
enum class EFactorForm { TwoSided, OneSided };

/// Crossings of the polyline with grid lines, in traversal order; the first point is the
/// line start (cut node) and the last is the line end. Throws ErrorKind::Assembly for an
/// open line.
std::vector<QuadraturePoint> edge_intersections(const FieldLine& line, const Grid& grid);

/// Inserts transversal crossings of `rays` in traversal order. A crossing within 1e-12 of
/// an existing point is merged into it and retagged Discontinuity.
std::vector<QuadraturePoint> insert_discontinuities(std::vector<QuadraturePoint> points,
                                                    const FieldLine& line,
                                                    const std::vector<Ray>& rays);

/// Fills div_before/div_after; at Discontinuity points the two sides are sampled 1e-10
/// along the local tangent.
void sample_divergence(std::vector<QuadraturePoint>& points, const FieldSpec& field);

/// Euclidean distances between consecutive points.
std::vector<double> segment_weights(const std::vector<QuadraturePoint>& points);

/// Trapezoid panels (w_i / 2) (d_i+ + d_{i+1}-) of div b.
std::vector<double> divergence_panels(const std::vector<QuadraturePoint>& points,
                                      const std::vector<double>& weights);

/// E(p_k) = exp(sum_{i<k} panel_i) + exp(-sum_{i>=k} panel_i), or only the first term.
std::vector<double> compute_E(const std::vector<QuadraturePoint>& points,
                              const std::vector<double>& weights,
                              EFactorForm form = EFactorForm::TwoSided);

/// Linear interpolation weights for edge points, bilinear for interior points,
/// weight 1 at grid nodes. Throws ErrorKind::OutOfDomain outside the closed domain.
std::vector<HostWeight> host_weights(const QuadraturePoint& q, const Grid& grid);

/// Trapezoid approximation of the loop integral of div b.
double loop_divergence_integral(const QuadratureSet& q);

/// Full pipeline for one closed line.
QuadratureSet build_quadrature_set(std::size_t cut_node, const FieldLine& line, const Grid& grid,
                                   const FieldSpec& field,
                                   EFactorForm form = EFactorForm::TwoSided);

}  // namespace islandap
