#pragma once

#include <functional>
#include <string>
#include <vector>

#include "islandap/geometry.hpp"

namespace islandap {

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Tensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

/// Anisotropy field and diffusivities. The direction b is stored through
/// its components; the rotation angle is never materialized.
struct FieldSpec {
  std::function<Vec2(Vec2)> direction;    // regularized unit vector b
  std::function<double(Vec2)> divergence; // div b
  std::function<double(Vec2)> alpha;      // perpendicular diffusivity
  double epsilon = 1.0;
  double delta_reg = 1e-16;
  std::vector<Vec2> singular_points;
  // Rays along which div b may jump; closed lines get a quadrature point at each crossing.
  std::vector<Ray> discontinuity_rays;
};

/// Manufactured benchmark: domain (-half_width, half_width) x (-half_height, half_height).
struct ProblemCase {
  std::string label;
  double half_width = 0.0;
  double half_height = 0.0;
  FieldSpec field;
  std::function<double(Vec2)> exact;  // empty when no closed form is known
  std::function<double(Vec2)> source;
  std::function<double(Vec2)> boundary;
  std::vector<Vec2> island_centers;
  std::vector<CutRay> cut_rays;

  bool has_exact() const { return static_cast<bool>(exact); }
};

enum class Evaluation { Regularized, Strict };

/// A = (1/eps) b b^T + alpha b_perp b_perp^T.
/// Strict evaluation throws ErrorKind::SingularPoint at a listed singular point.
Tensor2 diffusion_tensor(Vec2 p, const FieldSpec& field,
                         Evaluation mode = Evaluation::Regularized);

/// alpha b_perp b_perp^T, the epsilon-free part of A.
Tensor2 perpendicular_tensor(Vec2 p, const FieldSpec& field);

Vec2 unit_field(Vec2 p, const FieldSpec& field);

/// Elliptic level sets u = 1 - [g1^2 (x cos phi + y sin phi)^2 + g2^2 (x sin phi - y cos phi)^2]^(3/2)
/// on [-0.5, 0.5]^2 with b = (-u_y, u_x) / |grad u|.
ProblemCase example1_case(double gamma1, double gamma2, double phi, double epsilon,
                          double alpha = 1.0);

/// Two islands on [-1, 1] x [-0.5, 0.5]:
/// u = cos(lambda cos(2 pi (x - 3/2)) + cos(pi y)) + eps sin(2 pi y) sin(pi x).
ProblemCase example2_case(double lambda, double epsilon, double alpha = 1.0);

}  // namespace islandap
