#include <doctest.h>

#include <cmath>
#include <set>

#include "islandap/classification.hpp"
#include "islandap/error.hpp"
#include "islandap/grid.hpp"

using namespace islandap;

TEST_CASE("grid spacing and node count") {
  const Grid g = build_grid(0.5, 0.5, 8, 8);
  CHECK(g.hx() == doctest::Approx(0.0625));
  CHECK(g.hy() == doctest::Approx(0.0625));
  CHECK(g.node_count() == 17u * 17u);

  const Grid g2 = build_grid(1.0, 0.5, 64, 32);
  CHECK(g2.hx() == 0.015625);
  CHECK(g2.hy() == 0.015625);
  CHECK(g2.node_count() == 129u * 65u);
}

TEST_CASE("grid rejects degenerate extents and counts") {
  CHECK_THROWS_AS(build_grid(0.5, 0.5, 0, 4), Error);
  CHECK_THROWS_AS(build_grid(0.5, 0.5, 1, 4), Error);
  CHECK_THROWS_AS(build_grid(-0.5, 0.5, 4, 4), Error);
  CHECK_THROWS_AS(build_grid(0.5, 0.0, 4, 4), Error);
  try {
    build_grid(0.5, 0.5, 0, 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
  }
}

TEST_CASE("node index round trip and coordinates") {
  const Grid g = build_grid(1.0, 0.5, 6, 3);
  std::set<std::size_t> seen;
  for (int j = -g.J(); j <= g.J(); ++j)
    for (int i = -g.I(); i <= g.I(); ++i) {
      const std::size_t k = g.index(i, j);
      CHECK(k < g.node_count());
      CHECK(g.node(k) == NodeIndex{i, j});
      seen.insert(k);
      const Vec2 p = g.point(i, j);
      CHECK(p.x == doctest::Approx(i * g.hx()));
      CHECK(p.y == doctest::Approx(j * g.hy()));
    }
  CHECK(seen.size() == g.node_count());
  CHECK(g.point(0, 0) == Vec2{0.0, 0.0});
  CHECK(g.point(g.I(), g.J()).x == doctest::Approx(1.0));
}

TEST_CASE("boundary rule is symmetric under index reflection") {
  const Grid g = build_grid(0.5, 0.5, 5, 4);
  std::size_t boundary = 0;
  for (int j = -g.J(); j <= g.J(); ++j)
    for (int i = -g.I(); i <= g.I(); ++i) {
      CHECK(g.is_boundary(i, j) == g.is_boundary(-i, j));
      CHECK(g.is_boundary(i, j) == g.is_boundary(i, -j));
      boundary += g.is_boundary(i, j);
    }
  const std::size_t interior = static_cast<std::size_t>((2 * g.I() - 1) * (2 * g.J() - 1));
  CHECK(boundary == g.node_count() - interior);
  CHECK(g.is_boundary(-g.I(), 0));
}

TEST_CASE("classification of the circular case") {
  const ProblemCase pc = example1_case(0.5, 0.5, 0.0, 1e-6);
  const Grid g = build_grid(0.5, 0.5, 16, 16);
  const NodeClassification cls = classify_nodes(g, pc);

  REQUIRE(cls.tags.size() == g.node_count());
  CHECK(cls.tags[g.index(-16, 0)] == NodeTag::Boundary);
  CHECK(cls.tags[g.index(0, 0)] == NodeTag::ClosedInterior);

  // Cut nodes are exactly the negative x-axis interior nodes.
  std::set<std::size_t> expected;
  for (int i = -15; i < 0; ++i) expected.insert(g.index(i, 0));
  std::set<std::size_t> got;
  for (std::size_t k = 0; k < g.node_count(); ++k)
    if (cls.tags[k] == NodeTag::Cut) got.insert(k);
  CHECK(got == expected);
  CHECK(cls.cut_lines.size() == expected.size());

  // A node is closed exactly when its circle fits inside the domain.
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const NodeIndex n = g.node(k);
    if (g.is_boundary(n) || cls.tags[k] == NodeTag::Cut) continue;
    const double r = norm(g.point(n));
    if (r < 0.5 - 1e-9)
      CHECK(cls.tags[k] == NodeTag::ClosedInterior);
    else if (r > 0.5 + 1e-9)
      CHECK(cls.tags[k] == NodeTag::OpenInterior);
  }
}

TEST_CASE("cut lines start and end at their node exactly") {
  const ProblemCase pc = example1_case(0.5, 0.85, std::acos(-1.0) / 4, 1e-6);
  const Grid g = build_grid(0.5, 0.5, 16, 16);
  const NodeClassification cls = classify_nodes(g, pc);
  REQUIRE(!cls.cut_lines.empty());
  std::size_t prev = 0;
  for (const CutLine& c : cls.cut_lines) {
    CHECK(c.node >= prev);
    prev = c.node;
    CHECK(c.line.kind == LineKind::Closed);
    CHECK(c.line.points.front() == g.point(g.node(c.node)));
    CHECK(c.line.points.back() == g.point(g.node(c.node)));
    CHECK(cls.cut_line(c.node) == &c);
  }
}

TEST_CASE("classification is deterministic") {
  const ProblemCase pc = example2_case(0.1, 1e-3);
  const Grid g = build_grid(1.0, 0.5, 16, 8);
  const NodeClassification a = classify_nodes(g, pc);
  const NodeClassification b = classify_nodes(g, pc);
  CHECK(a.tags == b.tags);
  REQUIRE(a.cut_lines.size() == b.cut_lines.size());
  for (std::size_t k = 0; k < a.cut_lines.size(); ++k)
    CHECK(a.cut_lines[k].line.points == b.cut_lines[k].line.points);
}

TEST_CASE("two-island cut nodes lie on the cut rays inside each island") {
  const ProblemCase pc = example2_case(0.1, 1e-3);
  const Grid g = build_grid(1.0, 0.5, 32, 16);
  const NodeClassification cls = classify_nodes(g, pc);
  REQUIRE(cls.count(NodeTag::Cut) > 0);
  bool left = false;
  bool right = false;
  for (const CutLine& c : cls.cut_lines) {
    const Vec2 p = g.point(g.node(c.node));
    CHECK(p.y == 0.0);
    CHECK(((p.x > -1.0 && p.x < -0.5) || (p.x > 0.0 && p.x < 0.5)));
    left = left || p.x < 0.0;
    right = right || p.x > 0.0;
  }
  CHECK(left);
  CHECK(right);
  // Corners lie outside both separatrices.
  CHECK(cls.tags[g.index(-31, 15)] == NodeTag::OpenInterior);
  CHECK(cls.tags[g.index(31, -15)] == NodeTag::OpenInterior);
  CHECK(cls.tags[g.index(-16, 0)] == NodeTag::ClosedInterior);
  CHECK(cls.tags[g.index(16, 0)] == NodeTag::ClosedInterior);
}

TEST_CASE("classification rejects traces that run away") {
  ProblemCase pc = example1_case(0.5, 0.5, 0.0, 1e-6);
  // A stagnant field neither closes nor exits.
  pc.field.direction = [](Vec2) { return Vec2{0.0, 0.0}; };
  const Grid g = build_grid(0.5, 0.5, 4, 4);
  TracerParams params;
  CHECK_THROWS_AS(classify_nodes(g, pc, params), Error);
  try {
    classify_nodes(g, pc, params);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Classification);
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}
