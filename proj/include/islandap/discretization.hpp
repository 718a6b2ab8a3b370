#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "islandap/classification.hpp"
#include "islandap/field_model.hpp"
#include "islandap/grid.hpp"
#include "islandap/quadrature.hpp"

namespace islandap {

/// 3x3 coefficients c[di + 1][dj + 1] acting on u(i + di, j + dj).
using Stencil9 = std::array<std::array<double, 3>, 3>;

using TensorField = std::function<Tensor2(Vec2)>;

/// Nine-point discretization of -div(A grad u) at node (i, j): fluxes at the four edge
/// midpoints with two-point normal differences and four-point tangential averages,
/// A evaluated at the edge midpoints.
Stencil9 nine_point_stencil(const Grid& grid, const TensorField& tensor, int i, int j);

struct SparseRow {
  std::vector<std::pair<std::size_t, double>> entries;  // ascending column
  double rhs = 0.0;
};

/// Row of -div(A grad u) = f at interior node (i, j).
SparseRow stencil_row(const Grid& grid, const ProblemCase& problem, int i, int j);

/// Row of -div(alpha b_perp (b_perp . grad u)) at interior node (i, j); rhs = 0.
SparseRow perp_operator_row(const Grid& grid, const FieldSpec& field, int i, int j);

/// Trapezoid sum of E * Theta along the quadrature set, Theta = f + div(alpha b_perp
/// (b_perp . grad u)) interpolated from node values. Stored as
/// sum_k W_k E_k sum_n w_kn (-perp_row_n) . u = -sum_k W_k E_k sum_n w_kn f_n.
/// Host nodes on the boundary take Theta by linear extrapolation from the two nodes
/// inward along the normal. Throws ErrorKind::Assembly for an empty set.
SparseRow constraint_row(const Grid& grid, const ProblemCase& problem, const QuadratureSet& q);

enum class Scheme { AsymptoticPreserving, Baseline };
enum class RowKind { Stencil, Dirichlet, Constraint };

const char* to_string(Scheme scheme);
const char* to_string(RowKind kind);

/// Square system in CSR form; unknown k is the value at node Grid::node(k).
struct LinearSystem {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::vector<double> rhs;
  std::vector<RowKind> kinds;

  void push_row(const SparseRow& row, RowKind kind);
  std::size_t nnz() const { return vals.size(); }
  std::size_t count(RowKind kind) const;
  /// Row-major infinity norm.
  double norm_inf() const;
  std::vector<double> multiply(const std::vector<double>& u) const;
};

struct AssemblyOptions {
  Scheme scheme = Scheme::AsymptoticPreserving;
  EFactorForm e_form = EFactorForm::TwoSided;
};

/// One quadrature set per cut line, in cut-node order.
std::vector<QuadratureSet> build_quadrature_sets(const Grid& grid, const ProblemCase& problem,
                                                 const NodeClassification& cls,
                                                 EFactorForm form = EFactorForm::TwoSided);

/// Dirichlet rows on the boundary, constraint rows at Cut nodes (AP scheme only) and
/// nine-point rows everywhere else. Throws ErrorKind::Assembly when the classification
/// does not match the grid.
LinearSystem assemble_system(const Grid& grid, const ProblemCase& problem,
                             const NodeClassification& cls, const AssemblyOptions& options = {});

/// Matrix Market coordinate file for the matrix and array file for the right-hand side.
void write_matrix_market(const LinearSystem& sys, std::ostream& matrix, std::ostream& rhs);

}  // namespace islandap
