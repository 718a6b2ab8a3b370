#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "islandap/classification.hpp"
#include "islandap/error.hpp"
#include "islandap/solver.hpp"

using namespace islandap;

namespace {

LinearSystem from_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  LinearSystem s;
  s.n = static_cast<std::size_t>(a.rows());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    SparseRow row;
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (a(r, c) != 0.0) row.entries.emplace_back(static_cast<std::size_t>(c), a(r, c));
    row.rhs = b[r];
    s.push_row(row, RowKind::Stencil);
  }
  return s;
}

double dense_cond_inf(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd inv = a.inverse();
  return a.cwiseAbs().rowwise().sum().maxCoeff() * inv.cwiseAbs().rowwise().sum().maxCoeff();
}

ProblemCase isotropic_case(std::function<double(Vec2)> u) {
  ProblemCase pc;
  pc.half_width = 0.5;
  pc.half_height = 0.5;
  pc.field.direction = [](Vec2) { return Vec2{1.0, 0.0}; };
  pc.field.divergence = [](Vec2) { return 0.0; };
  pc.field.alpha = [](Vec2) { return 1.0; };
  pc.field.epsilon = 1.0;
  pc.exact = u;
  pc.boundary = u;
  pc.source = [](Vec2) { return 0.0; };
  return pc;
}

NodeClassification plain_tags(const Grid& g) {
  NodeClassification cls;
  cls.tags.assign(g.node_count(), NodeTag::OpenInterior);
  for (std::size_t k = 0; k < g.node_count(); ++k)
    if (g.is_boundary(g.node(k))) cls.tags[k] = NodeTag::Boundary;
  return cls;
}

}  // namespace

TEST_CASE("identity system") {
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(6, -1.0, 4.0);
  const SolveReport r = solve(from_dense(Eigen::MatrixXd::Identity(6, 6), b));
  for (int k = 0; k < 6; ++k) CHECK(r.solution[k] == b[k]);
  CHECK(r.residual_norm == 0.0);
  CHECK(r.nnz == 6);
  CHECK(condition_estimate(from_dense(Eigen::MatrixXd::Identity(6, 6), b), ConditionMode::Dense) ==
        doctest::Approx(1.0));
}

TEST_CASE("five-point Laplacian reproduces linear data") {
  const auto u = [](Vec2 p) { return 1.0 + 2.0 * p.x - 3.0 * p.y; };
  const Grid g = build_grid(0.5, 0.5, 16, 16);
  const ProblemCase pc = isotropic_case(u);
  for (const bool eq : {true, false}) {
    const SolveReport r = solve(assemble_system(g, pc, plain_tags(g)), {eq});
    double err = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k)
      err = std::max(err, std::abs(r.solution[k] - u(g.point(g.node(k)))));
    CHECK(err < 1e-10);
    CHECK(r.residual_norm < 1e-10);
    CHECK(r.backward_error < 1e-14);
    CHECK(r.factor_nnz >= r.nnz - 2 * 33 * 2);
  }
}

TEST_CASE("diagonal condition number") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 0) = 1e6;
  a(1, 1) = 1.0;
  const LinearSystem s = from_dense(a, Eigen::VectorXd::Ones(2));
  CHECK(condition_estimate(s, ConditionMode::Dense) == doctest::Approx(1e6));
  CHECK(condition_estimate(s, ConditionMode::Iterative) == doctest::Approx(1e6));
  CHECK(condition_estimate(s, ConditionMode::Dense, true) == doctest::Approx(1.0));
}

TEST_CASE("condition number of random matrices") {
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd a(20, 20);
    for (Eigen::Index r = 0; r < 20; ++r)
      for (Eigen::Index c = 0; c < 20; ++c) a(r, c) = nd(rng);
    const LinearSystem s = from_dense(a, Eigen::VectorXd::Ones(20));
    const double exact = dense_cond_inf(a);
    const double dense = condition_estimate(s, ConditionMode::Dense);
    const double est = condition_estimate(s, ConditionMode::Iterative);
    CHECK(dense == doctest::Approx(exact).epsilon(1e-8));
    CHECK(est <= exact * (1 + 1e-10));
    CHECK(est >= exact / 3.0);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const double k2 = svd.singularValues()(0) / svd.singularValues()(19);
    CHECK(dense >= k2 / 20.0);
    CHECK(dense <= k2 * 20.0);
  }
}

TEST_CASE("dense and iterative estimates agree on a discretization matrix") {
  const Grid g = build_grid(0.5, 0.5, 12, 12);
  const ProblemCase pc = example1_case(0.5, 0.85, 0.0, 1e-4);
  const LinearSystem s = assemble_system(g, pc, classify_nodes(g, pc));
  for (const bool eq : {false, true}) {
    const double dense = condition_estimate(s, ConditionMode::Dense, eq);
    const double est = condition_estimate(s, ConditionMode::Iterative, eq);
    CHECK(est <= dense * (1 + 1e-8));
    CHECK(est >= dense / 3.0);
  }
}

TEST_CASE("singular systems") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 3);
  const LinearSystem s = from_dense(a, Eigen::VectorXd::Ones(3));
  try {
    solve(s);
    FAIL("expected a singular system error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularSystem);
  }
  CHECK(std::isinf(condition_estimate(s, ConditionMode::Dense)));
  LinearSystem bad;
  bad.n = 2;
  CHECK_THROWS_AS(solve(bad), Error);
}

TEST_CASE("anisotropic system solves to a small residual") {
  const Grid g = build_grid(0.5, 0.5, 32, 32);
  const ProblemCase pc = example1_case(0.5, 0.85, 0.7853981633974483, 1e-9);
  const LinearSystem s = assemble_system(g, pc, classify_nodes(g, pc));
  const SolveReport eq = solve(s);
  const SolveReport raw = solve(s, {false});
  CHECK(eq.backward_error < 1e-12);
  CHECK(raw.backward_error < 1e-12);
  double err_eq = 0.0;
  double err_raw = 0.0;
  for (std::size_t k = 0; k < s.n; ++k) {
    const double u = pc.exact(g.point(g.node(k)));
    err_eq = std::max(err_eq, std::abs(eq.solution[k] - u));
    err_raw = std::max(err_raw, std::abs(raw.solution[k] - u));
  }
  MESSAGE("max error equilibrated " << err_eq << ", unscaled " << err_raw);
  CHECK(err_eq < 1e-3);
  CHECK(err_eq < err_raw);
  const SparseMatrix m = to_sparse_matrix(s);
  CHECK(static_cast<std::size_t>(m.nonZeros()) == s.nnz());
  CHECK(m.rows() == static_cast<Eigen::Index>(s.n));
}
