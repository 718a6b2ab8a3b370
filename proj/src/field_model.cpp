#include "islandap/field_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "islandap/error.hpp"

namespace islandap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeltaReg = 1e-16;

// First-order forward-mode value with its gradient in (x, y).
struct Dual {
  double v = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  static Dual x(double value) { return {value, 1.0, 0.0}; }
  static Dual y(double value) { return {value, 0.0, 1.0}; }
  static Dual c(double value) { return {value, 0.0, 0.0}; }
};

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
Dual operator-(Dual a) { return {-a.v, -a.dx, -a.dy}; }
Dual operator*(Dual a, Dual b) {
  return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
Dual operator*(double s, Dual a) { return {s * a.v, s * a.dx, s * a.dy}; }
Dual operator/(Dual a, Dual b) {
  const double inv = 1.0 / b.v;
  return {a.v * inv, (a.dx - a.v * inv * b.dx) * inv, (a.dy - a.v * inv * b.dy) * inv};
}
Dual sin(Dual a) {
  const double c = std::cos(a.v);
  return {std::sin(a.v), c * a.dx, c * a.dy};
}
Dual cos(Dual a) {
  const double s = -std::sin(a.v);
  return {std::cos(a.v), s * a.dx, s * a.dy};
}
Dual sqrt(Dual a) {
  const double r = std::sqrt(a.v);
  const double d = 0.5 / r;
  return {r, d * a.dx, d * a.dy};
}

void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) throw Error(kind, msg);
}

Tensor2 outer(Vec2 v, double scale) {
  return {scale * v.x * v.x, scale * v.x * v.y, scale * v.y * v.y};
}

// ---------------------------------------------------------------------------
// Example 1: q = g1^2 X^2 + g2^2 Y^2 with X = x c + y s, Y = x s - y c.

struct EllipticProfile {
  double g1sq;
  double g2sq;
  double c;
  double s;

  double q(Vec2 p) const {
    const double X = p.x * c + p.y * s;
    const double Y = p.x * s - p.y * c;
    return g1sq * X * X + g2sq * Y * Y;
  }
  Vec2 grad_q(Vec2 p) const {
    const double X = p.x * c + p.y * s;
    const double Y = p.x * s - p.y * c;
    return {2.0 * (g1sq * X * c + g2sq * Y * s), 2.0 * (g1sq * X * s - g2sq * Y * c)};
  }
  // Hessian of q (constant).
  Tensor2 hess_q() const {
    return {2.0 * (g1sq * c * c + g2sq * s * s), 2.0 * (g1sq - g2sq) * c * s,
            2.0 * (g1sq * s * s + g2sq * c * c)};
  }
  double u(Vec2 p) const { return 1.0 - std::pow(q(p), 1.5); }
  Vec2 grad_u(Vec2 p) const { return -1.5 * std::sqrt(q(p)) * grad_q(p); }

  Vec2 direction(Vec2 p, double delta) const {
    const Vec2 g = grad_u(p);
    return perp(g) * (1.0 / std::sqrt(dot(g, g) + delta));
  }

  // div b = -(R g)^T H g / N^3 with N = sqrt(|g|^2 + delta). The rank-one part
  // of the Hessian of u is parallel to grad q and drops out against R g.
  double divergence(Vec2 p, double delta) const {
    const double qv = q(p);
    if (qv <= 0.0) return 0.0;
    const Vec2 g = grad_u(p);
    const double n = std::sqrt(dot(g, g) + delta);
    return 1.5 * std::sqrt(qv) * dot(perp(g), hess_q().apply(g)) / (n * n * n);
  }

  // -Laplacian of u; zero at the origin by continuity.
  double minus_laplacian(Vec2 p) const {
    const double qv = q(p);
    if (qv <= 0.0) return 0.0;
    const Vec2 gq = grad_q(p);
    const Tensor2 h = hess_q();
    const double r = std::sqrt(qv);
    return 1.5 * (0.5 * dot(gq, gq) / r + r * (h.xx + h.yy));
  }
};

// ---------------------------------------------------------------------------
// Example 2: B = (-pi sin(pi y), 2 lambda pi sin(2 pi (x - 3/2))).

struct TwoIslandField {
  double lambda;

  static Dual shifted(Dual x) { return (2.0 * kPi) * (x - Dual::c(1.5)); }

  Vec2 B(Vec2 p) const {
    return {-kPi * std::sin(kPi * p.y), 2.0 * lambda * kPi * std::sin(2.0 * kPi * (p.x - 1.5))};
  }

  Vec2 direction(Vec2 p, double delta) const {
    const Vec2 b = B(p);
    return b * (1.0 / std::sqrt(dot(b, b) + delta));
  }

  // B is divergence free, so div b = -B^T J_B^T B / N^3.
  double divergence(Vec2 p, double delta) const {
    const Vec2 b = B(p);
    const double n = std::sqrt(dot(b, b) + delta);
    const double dB2dx = 4.0 * lambda * kPi * kPi * std::cos(2.0 * kPi * (p.x - 1.5));
    const double dB1dy = -kPi * kPi * std::cos(kPi * p.y);
    return -b.x * b.y * (dB2dx + dB1dy) / (n * n * n);
  }

  double psi(Vec2 p) const {
    return lambda * std::cos(2.0 * kPi * (p.x - 1.5)) + std::cos(kPi * p.y);
  }
  static double w(Vec2 p) { return std::sin(2.0 * kPi * p.y) * std::sin(kPi * p.x); }
};

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::DegenerateField: return "degenerate-field";
    case ErrorKind::TraceFailure: return "trace-failure";
    case ErrorKind::Classification: return "classification";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::Assembly: return "assembly";
    case ErrorKind::SingularSystem: return "singular-system";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Vec2 unit_field(Vec2 p, const FieldSpec& field) { return field.direction(p); }

Tensor2 diffusion_tensor(Vec2 p, const FieldSpec& field, Evaluation mode) {
  if (mode == Evaluation::Strict) {
    for (const Vec2& s : field.singular_points) {
      if (distance(s, p) < 1e-14) {
        std::ostringstream msg;
        msg << "diffusion tensor requested at singular point (" << p.x << ", " << p.y << ")";
        throw Error(ErrorKind::SingularPoint, msg.str());
      }
    }
  }
  const Vec2 b = field.direction(p);
  const Tensor2 par = outer(b, 1.0 / field.epsilon);
  const Tensor2 ort = outer(perp(b), field.alpha(p));
  return {par.xx + ort.xx, par.xy + ort.xy, par.yy + ort.yy};
}

Tensor2 perpendicular_tensor(Vec2 p, const FieldSpec& field) {
  return outer(perp(field.direction(p)), field.alpha(p));
}

ProblemCase example1_case(double gamma1, double gamma2, double phi, double epsilon,
                          double alpha) {
  require(gamma1 > 0.0 && gamma2 > 0.0, ErrorKind::InvalidConfig,
          "example1: gamma1 and gamma2 must be positive");
  require(phi >= 0.0 && phi < kPi, ErrorKind::InvalidConfig, "example1: phi must lie in [0, pi)");
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorKind::InvalidConfig,
          "example1: eps must lie in (0, 1]");
  require(alpha > 0.0, ErrorKind::InvalidConfig, "example1: alpha must be positive");

  const EllipticProfile prof{gamma1 * gamma1, gamma2 * gamma2, std::cos(phi), std::sin(phi)};

  ProblemCase pc;
  std::ostringstream label;
  label << "example1(g1=" << gamma1 << ",g2=" << gamma2 << ",phi=" << phi << ")";
  pc.label = label.str();
  pc.half_width = 0.5;
  pc.half_height = 0.5;

  FieldSpec& f = pc.field;
  f.epsilon = epsilon;
  f.delta_reg = kDeltaReg;
  f.direction = [prof](Vec2 p) { return prof.direction(p, kDeltaReg); };
  f.divergence = [prof](Vec2 p) { return prof.divergence(p, kDeltaReg); };
  f.alpha = [alpha](Vec2) { return alpha; };
  f.singular_points = {{0.0, 0.0}};
  if (gamma1 != gamma2) f.discontinuity_rays = {Ray{{0.0, 0.0}, {std::cos(phi), std::sin(phi)}}};

  // b . grad u = 0 identically, so A grad u = alpha b_perp (b_perp . grad u) = alpha grad u
  // and the source carries no 1/eps term.
  pc.exact = [prof](Vec2 p) { return prof.u(p); };
  pc.boundary = pc.exact;
  pc.source = [prof, alpha](Vec2 p) { return alpha * prof.minus_laplacian(p); };
  pc.island_centers = {{0.0, 0.0}};
  pc.cut_rays = {CutRay{{0.0, 0.0}, -0.5}};
  return pc;
}

ProblemCase example2_case(double lambda, double epsilon, double alpha) {
  require(lambda != 0.0, ErrorKind::DegenerateField,
          "example2: lambda = 0 leaves no closed field lines");
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorKind::InvalidConfig,
          "example2: eps must lie in (0, 1]");
  require(alpha > 0.0, ErrorKind::InvalidConfig, "example2: alpha must be positive");

  const TwoIslandField fld{lambda};

  ProblemCase pc;
  std::ostringstream label;
  label << "example2(lambda=" << lambda << ")";
  pc.label = label.str();
  pc.half_width = 1.0;
  pc.half_height = 0.5;

  FieldSpec& f = pc.field;
  f.epsilon = epsilon;
  f.delta_reg = kDeltaReg;
  f.direction = [fld](Vec2 p) { return fld.direction(p, kDeltaReg); };
  f.divergence = [fld](Vec2 p) { return fld.divergence(p, kDeltaReg); };
  f.alpha = [alpha](Vec2) { return alpha; };
  f.singular_points = {{-1.0, 0.0}, {-0.5, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};

  pc.exact = [fld, epsilon](Vec2 p) { return std::cos(fld.psi(p)) + epsilon * fld.w(p); };
  pc.boundary = pc.exact;

  // With u = u0 + eps w and b . grad u0 = 0, the parallel flux (1/eps) b (b . grad u)
  // equals b (b . grad w); the flux F = b (b . grad w) + alpha b_perp (b_perp . grad u)
  // is differentiated in forward mode.
  pc.source = [lambda, epsilon, alpha](Vec2 p) {
    const Dual x = Dual::x(p.x);
    const Dual y = Dual::y(p.y);
    const Dual B1 = -kPi * sin(kPi * y);
    const Dual B2 = (2.0 * lambda * kPi) * sin(TwoIslandField::shifted(x));
    const Dual n = sqrt(B1 * B1 + B2 * B2 + Dual::c(kDeltaReg));
    const Dual b1 = B1 / n;
    const Dual b2 = B2 / n;

    const Dual psi = lambda * cos(TwoIslandField::shifted(x)) + cos(kPi * y);
    const Dual dpsi_dx = (-2.0 * kPi * lambda) * sin(TwoIslandField::shifted(x));
    const Dual dpsi_dy = -kPi * sin(kPi * y);
    const Dual dw_dx = kPi * sin(2.0 * kPi * y) * cos(kPi * x);
    const Dual dw_dy = 2.0 * kPi * cos(2.0 * kPi * y) * sin(kPi * x);
    const Dual du_dx = -sin(psi) * dpsi_dx + epsilon * dw_dx;
    const Dual du_dy = -sin(psi) * dpsi_dy + epsilon * dw_dy;

    const Dual par = b1 * dw_dx + b2 * dw_dy;
    const Dual bp1 = -b2;
    const Dual bp2 = b1;
    const Dual ort = alpha * (bp1 * du_dx + bp2 * du_dy);
    const Dual F1 = b1 * par + bp1 * ort;
    const Dual F2 = b2 * par + bp2 * ort;
    return -(F1.dx + F2.dy);
  };
  pc.island_centers = {{-0.5, 0.0}, {0.5, 0.0}};
  pc.cut_rays = {CutRay{{-0.5, 0.0}, -1.0}, CutRay{{0.5, 0.0}, 0.0}};
  return pc;
}

}  // namespace islandap
