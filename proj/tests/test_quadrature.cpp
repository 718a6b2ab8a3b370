#include <doctest.h>

#include <cmath>
#include <numbers>

#include "islandap/error.hpp"
#include "islandap/quadrature.hpp"

using namespace islandap;

namespace {

constexpr double kPi = std::numbers::pi;

FieldSpec zero_div_field() {
  FieldSpec f;
  f.direction = [](Vec2) { return Vec2{1.0, 0.0}; };
  f.divergence = [](Vec2) { return 0.0; };
  f.alpha = [](Vec2) { return 1.0; };
  return f;
}

FieldLine closed_polyline(std::vector<Vec2> pts) {
  FieldLine l;
  l.points = std::move(pts);
  l.kind = LineKind::Closed;
  l.method = TraceMethod::Two;
  l.start = l.points.front();
  return l;
}

// Circle of radius r as a fine closed polygon starting at (-r, 0), clockwise like b.
FieldLine circle(double r, int n) {
  std::vector<Vec2> pts;
  for (int k = 0; k < n; ++k) {
    const double t = kPi - 2 * kPi * k / n;
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  pts.push_back(pts.front());
  return closed_polyline(pts);
}

double weight_sum(const std::vector<HostWeight>& w) {
  double s = 0.0;
  for (const HostWeight& h : w) s += h.weight;
  return s;
}

}  // namespace

TEST_CASE("circle crossings with grid lines") {
  const Grid g = build_grid(0.5, 0.5, 4, 4);  // h = 0.125
  const FieldLine line = circle(0.25, 4000);
  const auto pts = edge_intersections(line, g);
  REQUIRE(pts.size() >= 2);
  CHECK(pts.front().kind == PointKind::CutNode);
  CHECK(pts.back().kind == PointKind::CutNode);
  CHECK(pts.front().p == pts.back().p);

  // Transversal crossings of x, y in {-0.125, 0, 0.125}: two each, twelve in total,
  // of which (-0.25, 0) is the cut node itself.
  std::size_t interior = pts.size() - 2;
  CHECK(interior == 11);
  for (const QuadraturePoint& q : pts) {
    CHECK(norm(q.p) == doctest::Approx(0.25).epsilon(1e-5));
    const bool on_col = q.column != kNoLine;
    const bool on_row = q.row != kNoLine;
    CHECK((on_col || on_row));
    if (on_col) CHECK(q.p.x == doctest::Approx(q.column * 0.125));
    if (on_row) CHECK(q.p.y == doctest::Approx(q.row * 0.125));
  }
  for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k].param > pts[k - 1].param);
}

TEST_CASE("segment crossing by linear interpolation") {
  const Grid g = build_grid(0.5, 0.5, 4, 4);
  const FieldLine line = closed_polyline({{-0.01, 0.06}, {0.01, 0.06}, {0.01, 0.07}, {-0.01, 0.06}});
  const auto pts = edge_intersections(line, g);
  REQUIRE(pts.size() >= 2);
  CHECK(pts[1].kind == PointKind::VerticalEdge);
  CHECK(pts[1].column == 0);
  CHECK(pts[1].p.x == 0.0);
  CHECK(pts[1].p.y == doctest::Approx(0.06));
  CHECK(pts[1].param == doctest::Approx(0.5));
}

TEST_CASE("a loop inside one cell is degenerate") {
  const Grid g = build_grid(0.5, 0.5, 4, 4);
  const FieldLine line = closed_polyline({{0.01, 0.01}, {0.05, 0.02}, {0.03, 0.06}, {0.01, 0.01}});
  CHECK_THROWS_AS(edge_intersections(line, g), Error);
}

TEST_CASE("open lines are rejected") {
  const Grid g = build_grid(0.5, 0.5, 4, 4);
  FieldLine line = circle(0.25, 100);
  line.kind = LineKind::Open;
  CHECK_THROWS_AS(edge_intersections(line, g), Error);
}

TEST_CASE("discontinuity insertion") {
  const Grid g = build_grid(0.5, 0.5, 4, 4);
  const FieldLine line = circle(0.2, 3000);
  const auto base = edge_intersections(line, g);

  SUBCASE("empty locus leaves the list unchanged") {
    const auto same = insert_discontinuities(base, line, {});
    CHECK(same.size() == base.size());
  }
  SUBCASE("one crossing per ray away from the origin") {
    const Ray ray{{0.0, 0.0}, {std::cos(kPi / 4), std::sin(kPi / 4)}};
    const auto with = insert_discontinuities(base, line, {ray});
    CHECK(with.size() == base.size() + 1);
    std::size_t jumps = 0;
    for (const QuadraturePoint& q : with) {
      if (q.kind != PointKind::Discontinuity) continue;
      ++jumps;
      CHECK(q.jump);
      CHECK(std::atan2(q.p.y, q.p.x) == doctest::Approx(kPi / 4).epsilon(1e-6));
    }
    CHECK(jumps == 1);
    for (std::size_t k = 1; k < with.size(); ++k) CHECK(with[k].param > with[k - 1].param);
  }
  SUBCASE("crossing on an existing grid-line point is merged") {
    const Ray ray{{0.0, 0.0}, {0.0, 1.0}};  // lies on x = 0
    const auto with = insert_discontinuities(base, line, {ray});
    CHECK(with.size() == base.size());
    std::size_t jumps = 0;
    for (const QuadraturePoint& q : with) jumps += q.kind == PointKind::Discontinuity;
    CHECK(jumps == 1);
  }
}

TEST_CASE("integrating factor formula") {
  SUBCASE("single panel") {
    std::vector<QuadraturePoint> pts(2);
    pts[0].p = {0, 0};
    pts[1].p = {1, 0};
    for (auto& q : pts) q.div_before = q.div_after = 1.0;
    const auto w = segment_weights(pts);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == 1.0);
    const auto E = compute_E(pts, w);
    CHECK(E[0] == doctest::Approx(1.0 + std::exp(-1.0)));
    CHECK(E[1] == doctest::Approx(std::exp(1.0) + 1.0));
    const auto E1 = compute_E(pts, w, EFactorForm::OneSided);
    CHECK(E1[0] == doctest::Approx(1.0));
    CHECK(E1[1] == doctest::Approx(std::exp(1.0)));
  }
  SUBCASE("one-sided values at a jump") {
    std::vector<QuadraturePoint> pts(3);
    pts[0].p = {0, 0};
    pts[1].p = {1, 0};
    pts[2].p = {2, 0};
    pts[0].div_after = 1.0;
    pts[1].div_before = 1.0;
    pts[1].div_after = -1.0;
    pts[2].div_before = -1.0;
    const auto panels = divergence_panels(pts, segment_weights(pts));
    CHECK(panels[0] == doctest::Approx(1.0));
    CHECK(panels[1] == doctest::Approx(-1.0));
  }
}

TEST_CASE("divergence-free field gives E = 2 everywhere") {
  const Grid g = build_grid(0.5, 0.5, 16, 16);
  const ProblemCase pc = example1_case(0.5, 0.5, 0.0, 1e-6);
  const FieldLine line = trace_method_two({-0.25, 0.0}, pc.field, 0.25 * g.hx(), g.hx(), g);
  const QuadratureSet q = build_quadrature_set(g.index(-8, 0), line, g, pc.field);
  for (const double e : q.E) CHECK(e == doctest::Approx(2.0).epsilon(1e-12));
  const QuadratureSet z = build_quadrature_set(g.index(-8, 0), line, g, zero_div_field());
  for (const double e : z.E) CHECK(e == 2.0);
}

TEST_CASE("quadrature set invariants on a traced tilted ellipse") {
  const Grid g = build_grid(0.5, 0.5, 32, 32);
  const ProblemCase pc = example1_case(0.5, 0.85, kPi / 4, 1e-6);
  const FieldLine line = trace_method_two({-0.25, 0.0}, pc.field, 0.25 * g.hx(), g.hx(), g);
  REQUIRE(line.kind == LineKind::Closed);
  const QuadratureSet q = build_quadrature_set(g.index(-16, 0), line, g, pc.field);

  double sum = 0.0;
  for (const double w : q.weights) sum += w;
  CHECK(sum <= line_length(line) + 1e-12);
  CHECK(sum == doctest::Approx(line_length(line)).epsilon(1e-3));
  for (std::size_t k = 1; k < q.size(); ++k) CHECK(q.points[k].param > q.points[k - 1].param);
  for (std::size_t k = 1; k < q.size(); ++k) CHECK(q.weights[k - 1] >= 1e-12);
  for (const double e : q.E) CHECK(e > 0.0);
  CHECK(q.E.front() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(q.E.back() == doctest::Approx(2.0).epsilon(1e-3));

  std::size_t jumps = 0;
  for (const QuadraturePoint& p : q.points) jumps += p.kind == PointKind::Discontinuity;
  CHECK(jumps == 1);

  for (const auto& hosts : q.hosts) {
    CHECK(weight_sum(hosts) == doctest::Approx(1.0).epsilon(1e-14));
    for (const HostWeight& h : hosts) {
      CHECK(h.weight >= 0.0);
      CHECK(h.weight <= 1.0);
    }
  }
  REQUIRE(q.hosts.front().size() == 1);
  CHECK(q.hosts.front()[0].node == g.index(-16, 0));
}

TEST_CASE("host weights") {
  const Grid g = build_grid(0.5, 0.5, 4, 4);
  auto point = [&](Vec2 p) {
    QuadraturePoint q;
    q.p = p;
    const double xi = p.x / g.hx();
    const double yj = p.y / g.hy();
    if (std::abs(xi - std::round(xi)) < 1e-12) q.column = static_cast<int>(std::round(xi));
    if (std::abs(yj - std::round(yj)) < 1e-12) q.row = static_cast<int>(std::round(yj));
    return q;
  };
  SUBCASE("grid node") {
    const auto w = host_weights(point({0.125, -0.25}), g);
    REQUIRE(w.size() == 1);
    CHECK(w[0].node == g.index(1, -2));
    CHECK(w[0].weight == 1.0);
  }
  SUBCASE("edge midpoint") {
    const auto w = host_weights(point({0.1875, 0.125}), g);
    REQUIRE(w.size() == 2);
    CHECK(w[0].weight == doctest::Approx(0.5));
    CHECK(w[1].weight == doctest::Approx(0.5));
    CHECK(w[0].node == g.index(1, 1));
    CHECK(w[1].node == g.index(2, 1));
  }
  SUBCASE("vertical edge") {
    const auto w = host_weights(point({0.125, 0.15}), g);
    REQUIRE(w.size() == 2);
    CHECK(w[0].node == g.index(1, 1));
    CHECK(w[0].weight == doctest::Approx((0.25 - 0.15) / 0.125));
    CHECK(w[1].weight == doctest::Approx((0.15 - 0.125) / 0.125));
  }
  SUBCASE("cell center") {
    const auto w = host_weights(point({0.1875, 0.1875}), g);
    REQUIRE(w.size() == 4);
    for (const HostWeight& h : w) CHECK(h.weight == doctest::Approx(0.25));
  }
  SUBCASE("bilinear weights reproduce linear functions") {
    const Vec2 p{-0.31, 0.07};
    const auto w = host_weights(point(p), g);
    double x = 0.0;
    double y = 0.0;
    for (const HostWeight& h : w) {
      x += h.weight * g.point(g.node(h.node)).x;
      y += h.weight * g.point(g.node(h.node)).y;
    }
    CHECK(x == doctest::Approx(p.x));
    CHECK(y == doctest::Approx(p.y));
    CHECK(weight_sum(w) == doctest::Approx(1.0));
  }
  SUBCASE("outside the domain") {
    CHECK_THROWS_AS(host_weights(point({0.6, 0.0}), g), Error);
    try {
      host_weights(point({0.0, -0.7}), g);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfDomain);
    }
  }
}

TEST_CASE("loop integral of div b vanishes on a symmetric ellipse") {
  const Grid g = build_grid(0.5, 0.5, 16, 16);
  const ProblemCase pc = example1_case(0.5, 0.85, 0.0, 1e-6);
  const FieldLine line = trace_method_two({-0.25, 0.0}, pc.field, 0.25 * g.hx(), g.hx(), g);
  const QuadratureSet q = build_quadrature_set(g.index(-8, 0), line, g, pc.field);
  CHECK(std::abs(loop_divergence_integral(q)) < 1e-12);
}
