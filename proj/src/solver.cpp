#include "islandap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "islandap/error.hpp"

namespace islandap {

namespace {

// COLAMD with rows of more than kDenseRowEntries entries set aside as dense, so that the
// long constraint rows do not merge their columns into one clique.
constexpr double kDenseRowEntries = 32.0;

struct DenseAwareColamd {
  using PermutationType = Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int>;

  template <class MatrixType>
  void operator()(const MatrixType& mat, PermutationType& perm) {
    namespace colamd = Eigen::internal::Colamd;
    const int m = static_cast<int>(mat.rows());
    const int n = static_cast<int>(mat.cols());
    const int nnz = static_cast<int>(mat.nonZeros());
    const int alen = colamd::recommended(nnz, m, n);
    double knobs[colamd::NKnobs];
    int stats[colamd::NStats];
    colamd::set_defaults(knobs);
    knobs[colamd::DenseRow] = std::min(0.5, kDenseRowEntries / std::max(n, 1));
    Eigen::VectorXi p(n + 1);
    Eigen::VectorXi a(alen);
    for (int i = 0; i <= n; ++i) p(i) = mat.outerIndexPtr()[i];
    for (int i = 0; i < nnz; ++i) a(i) = mat.innerIndexPtr()[i];
    if (!colamd::compute_ordering(m, n, alen, a.data(), p.data(), knobs, stats))
      throw Error(ErrorKind::SingularSystem, "column ordering failed");
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm.indices()(p(i)) = i;
  }
};

using LU = Eigen::SparseLU<SparseMatrix, DenseAwareColamd>;

double inf_norm(const SparseMatrix& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return a.rows() > 0 ? rows.maxCoeff() : 0.0;
}

Eigen::VectorXd row_scaling(const LinearSystem& sys) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(sys.n));
  for (std::size_t r = 0; r < sys.n; ++r) {
    double s = 0.0;
    for (std::size_t k = sys.row_ptr[r]; k < sys.row_ptr[r + 1]; ++k) s += std::abs(sys.vals[k]);
    d[static_cast<Eigen::Index>(r)] = s > 0.0 ? 1.0 / s : 1.0;
  }
  return d;
}

SparseMatrix build(const LinearSystem& sys, const Eigen::VectorXd* scale) {
  std::vector<Eigen::Triplet<double, int>> trip;
  trip.reserve(sys.nnz());
  for (std::size_t r = 0; r < sys.n; ++r) {
    const double s = scale ? (*scale)[static_cast<Eigen::Index>(r)] : 1.0;
    for (std::size_t k = sys.row_ptr[r]; k < sys.row_ptr[r + 1]; ++k)
      trip.emplace_back(static_cast<int>(r), static_cast<int>(sys.cols[k]), s * sys.vals[k]);
  }
  const auto n = static_cast<Eigen::Index>(sys.n);
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

bool factorize(LU& lu, const SparseMatrix& a) {
  lu.analyzePattern(a);
  lu.factorize(a);
  return lu.info() == Eigen::Success;
}

// ||A^-1||_inf: max over rows of A^-1, i.e. max_i ||A^-T e_i||_1.
double inverse_norm_dense(LU& lu, Eigen::Index n) {
  constexpr Eigen::Index kBatch = 128;
  double best = 0.0;
  for (Eigen::Index c0 = 0; c0 < n; c0 += kBatch) {
    const Eigen::Index m = std::min(kBatch, n - c0);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, m);
    for (Eigen::Index k = 0; k < m; ++k) rhs(c0 + k, k) = 1.0;
    const Eigen::MatrixXd x = lu.transpose().solve(rhs);
    for (Eigen::Index k = 0; k < m; ++k) best = std::max(best, x.col(k).lpNorm<1>());
  }
  return best;
}

// Hager-Higham estimate of ||B||_1 for B = A^-T, so that ||A^-1||_inf = ||B||_1.
double inverse_norm_estimate(LU& lu, Eigen::Index n) {
  auto apply_b = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return lu.transpose().solve(v); };
  auto apply_bt = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return lu.solve(v); };

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double est = 0.0;
  Eigen::Index last_j = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::VectorXd y = apply_b(x);
    est = std::max(est, y.lpNorm<1>());
    Eigen::VectorXd xi(n);
    for (Eigen::Index i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    const Eigen::VectorXd z = apply_bt(xi);
    Eigen::Index j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (iter > 0 && (zmax <= z.dot(x) || j == last_j)) break;
    x.setZero();
    x[j] = 1.0;
    last_j = j;
  }
  Eigen::VectorXd alt(n);
  for (Eigen::Index i = 0; i < n; ++i)
    alt[i] = (i % 2 == 0 ? 1.0 : -1.0) *
             (1.0 + static_cast<double>(i) / static_cast<double>(std::max<Eigen::Index>(n - 1, 1)));
  const double alt_est = 2.0 * apply_b(alt).lpNorm<1>() / (3.0 * static_cast<double>(n));
  return std::max(est, alt_est);
}

}  // namespace

SparseMatrix to_sparse_matrix(const LinearSystem& sys) { return build(sys, nullptr); }

SolveReport solve(const LinearSystem& sys, const SolveOptions& options) {
  if (sys.rhs.size() != sys.n || sys.row_ptr.size() != sys.n + 1)
    throw Error(ErrorKind::SingularSystem, "system is not square");
  const auto n = static_cast<Eigen::Index>(sys.n);
  Eigen::VectorXd scale = options.equilibrate ? row_scaling(sys) : Eigen::VectorXd::Ones(n);
  const SparseMatrix a = build(sys, &scale);

  LU lu;
  if (!factorize(lu, a)) {
    throw Error(ErrorKind::SingularSystem, "sparse LU failed: " + lu.lastErrorMessage());
  }
  Eigen::VectorXd b(n);
  for (Eigen::Index r = 0; r < n; ++r) b[r] = scale[r] * sys.rhs[static_cast<std::size_t>(r)];
  const Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw Error(ErrorKind::SingularSystem, "sparse LU produced a non-finite solution");

  SolveReport report;
  report.solution.assign(x.data(), x.data() + n);
  const std::vector<double> ax = sys.multiply(report.solution);
  double res = 0.0;
  double bnorm = 0.0;
  double unorm = 0.0;
  for (std::size_t r = 0; r < sys.n; ++r) {
    res = std::max(res, std::abs(ax[r] - sys.rhs[r]));
    bnorm = std::max(bnorm, std::abs(sys.rhs[r]));
    unorm = std::max(unorm, std::abs(report.solution[r]));
  }
  report.residual_norm = bnorm > 0.0 ? res / bnorm : res;
  const double denom = sys.norm_inf() * unorm + bnorm;
  report.backward_error = denom > 0.0 ? res / denom : res;
  report.nnz = sys.nnz();
  report.factor_nnz = static_cast<std::size_t>(lu.nnzL() + lu.nnzU());
  if (!std::isfinite(report.residual_norm))
    throw Error(ErrorKind::SingularSystem, "residual is not finite");
  return report;
}

double condition_estimate(const SparseMatrix& a, ConditionMode mode) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  LU lu;
  if (!factorize(lu, a)) return std::numeric_limits<double>::infinity();
  const double inv =
      mode == ConditionMode::Dense ? inverse_norm_dense(lu, n) : inverse_norm_estimate(lu, n);
  if (!std::isfinite(inv)) return std::numeric_limits<double>::infinity();
  return inf_norm(a) * inv;
}

double condition_estimate(const LinearSystem& sys, ConditionMode mode, bool equilibrate_rows) {
  if (!equilibrate_rows) return condition_estimate(build(sys, nullptr), mode);
  const Eigen::VectorXd scale = row_scaling(sys);
  return condition_estimate(build(sys, &scale), mode);
}

}  // namespace islandap
