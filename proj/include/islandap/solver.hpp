#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "islandap/discretization.hpp"

namespace islandap {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct SolveOptions {
  /// Scale each row to unit 1-norm before factorizing. The residual is still
  /// measured on the unscaled system.
  bool equilibrate = true;
};

struct SolveReport {
  std::vector<double> solution;
  double residual_norm = 0.0;  // ||Au - b||_inf / ||b||_inf (absolute when b = 0)
  /// ||Au - b||_inf / (||A||_inf ||u||_inf + ||b||_inf).
  double backward_error = 0.0;
  std::size_t nnz = 0;
  std::size_t factor_nnz = 0;  // nonzeros in L plus U
  std::optional<double> cond_estimate;
};

SparseMatrix to_sparse_matrix(const LinearSystem& sys);

/// Direct sparse LU with partial pivoting and COLAMD ordering.
/// Throws ErrorKind::SingularSystem when factorization fails or the solution is not finite.
SolveReport solve(const LinearSystem& sys, const SolveOptions& options = {});

enum class ConditionMode { Dense, Iterative };

/// kappa_inf = ||A||_inf ||A^-1||_inf. Dense computes ||A^-1||_inf exactly from
/// transposed LU solves; Iterative uses the Hager-Higham 1-norm estimator on A^-T.
/// With `equilibrate_rows` the rows are first scaled to unit 1-norm.
/// Returns +infinity for a singular matrix.
double condition_estimate(const SparseMatrix& a, ConditionMode mode);
double condition_estimate(const LinearSystem& sys, ConditionMode mode,
                          bool equilibrate_rows = false);

}  // namespace islandap
