#include "islandap/discretization.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "islandap/error.hpp"
#include "islandap/format.hpp"

namespace islandap {

namespace {

SparseRow row_from_stencil(const Grid& grid, const Stencil9& c, int i, int j) {
  SparseRow row;
  row.entries.reserve(9);
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const double v = c[di + 1][dj + 1];
      if (v != 0.0) row.entries.emplace_back(grid.index(i + di, j + dj), v);
    }
  return row;
}

using Support = std::vector<std::pair<NodeIndex, double>>;

// Nodal Theta at (i, j) as a combination of interior nodal values; boundary nodes are
// extrapolated linearly from the two nodes inward along each boundary normal.
Support theta_support(const Grid& grid, int i, int j) {
  auto combine = [](Support a, const Support& b) {
    for (auto& e : a) e.second *= 2.0;
    for (const auto& e : b) a.emplace_back(e.first, -e.second);
    return a;
  };
  if (std::abs(i) == grid.I()) {
    const int s = i > 0 ? 1 : -1;
    return combine(theta_support(grid, i - s, j), theta_support(grid, i - 2 * s, j));
  }
  if (std::abs(j) == grid.J()) {
    const int s = j > 0 ? 1 : -1;
    return combine(theta_support(grid, i, j - s), theta_support(grid, i, j - 2 * s));
  }
  return {{NodeIndex{i, j}, 1.0}};
}

}  // namespace

const char* to_string(Scheme scheme) {
  return scheme == Scheme::AsymptoticPreserving ? "ap" : "baseline";
}

const char* to_string(RowKind kind) {
  switch (kind) {
    case RowKind::Stencil: return "stencil";
    case RowKind::Dirichlet: return "dirichlet";
    case RowKind::Constraint: return "constraint";
  }
  return "unknown";
}

Stencil9 nine_point_stencil(const Grid& grid, const TensorField& tensor, int i, int j) {
  const double hx = grid.hx();
  const double hy = grid.hy();
  const Vec2 p = grid.point(i, j);
  const Tensor2 ae = tensor(p + Vec2{0.5 * hx, 0.0});
  const Tensor2 aw = tensor(p - Vec2{0.5 * hx, 0.0});
  const Tensor2 an = tensor(p + Vec2{0.0, 0.5 * hy});
  const Tensor2 as = tensor(p - Vec2{0.0, 0.5 * hy});

  Stencil9 c{};
  const double ihx2 = 1.0 / (hx * hx);
  const double ihy2 = 1.0 / (hy * hy);
  const double ixy = 1.0 / (4.0 * hx * hy);

  // -(Q1[i+1/2] - Q1[i-1/2]) / hx
  c[2][1] -= ae.xx * ihx2;
  c[1][1] += (ae.xx + aw.xx) * ihx2;
  c[0][1] -= aw.xx * ihx2;
  {
    const double ke = -ae.xy * ixy;
    c[2][2] += ke; c[1][2] += ke; c[1][0] -= ke; c[2][0] -= ke;
    const double kw = aw.xy * ixy;
    c[0][2] += kw; c[1][2] += kw; c[1][0] -= kw; c[0][0] -= kw;
  }
  // -(Q2[j+1/2] - Q2[j-1/2]) / hy
  c[1][2] -= an.yy * ihy2;
  c[1][1] += (an.yy + as.yy) * ihy2;
  c[1][0] -= as.yy * ihy2;
  {
    const double kn = -an.xy * ixy;
    c[2][2] += kn; c[2][1] += kn; c[0][1] -= kn; c[0][2] -= kn;
    const double ks = as.xy * ixy;
    c[2][0] += ks; c[2][1] += ks; c[0][1] -= ks; c[0][0] -= ks;
  }
  return c;
}

SparseRow stencil_row(const Grid& grid, const ProblemCase& problem, int i, int j) {
  const FieldSpec& field = problem.field;
  const Stencil9 c = nine_point_stencil(
      grid, [&field](Vec2 p) { return diffusion_tensor(p, field); }, i, j);
  SparseRow row = row_from_stencil(grid, c, i, j);
  row.rhs = problem.source(grid.point(i, j));
  return row;
}

SparseRow perp_operator_row(const Grid& grid, const FieldSpec& field, int i, int j) {
  const Stencil9 c = nine_point_stencil(
      grid, [&field](Vec2 p) { return perpendicular_tensor(p, field); }, i, j);
  return row_from_stencil(grid, c, i, j);
}

SparseRow constraint_row(const Grid& grid, const ProblemCase& problem, const QuadratureSet& q) {
  if (q.points.size() < 2 || q.weights.size() + 1 != q.points.size())
    throw Error(ErrorKind::Assembly, "constraint row needs a non-empty quadrature set");

  std::unordered_map<std::size_t, SparseRow> perp_rows;
  auto perp_at = [&](NodeIndex n) -> const SparseRow& {
    const std::size_t idx = grid.index(n);
    auto it = perp_rows.find(idx);
    if (it == perp_rows.end()) {
      SparseRow r = perp_operator_row(grid, problem.field, n.i, n.j);
      r.rhs = problem.source(grid.point(n));
      it = perp_rows.emplace(idx, std::move(r)).first;
    }
    return it->second;
  };

  std::map<std::size_t, double> acc;
  double rhs = 0.0;
  const std::size_t K = q.points.size() - 1;
  for (std::size_t k = 0; k <= K; ++k) {
    const double trap =
        0.5 * ((k > 0 ? q.weights[k - 1] : 0.0) + (k < K ? q.weights[k] : 0.0));
    const double coef = trap * q.E[k];
    if (coef == 0.0) continue;
    for (const HostWeight& hw : q.hosts[k]) {
      const NodeIndex host = grid.node(hw.node);
      for (const auto& [node, c] : theta_support(grid, host.i, host.j)) {
        const double s = coef * hw.weight * c;
        const SparseRow& pr = perp_at(node);
        for (const auto& [col, v] : pr.entries) acc[col] -= s * v;
        rhs -= s * pr.rhs;
      }
    }
  }

  SparseRow row;
  row.entries.assign(acc.begin(), acc.end());
  row.rhs = rhs;
  return row;
}

void LinearSystem::push_row(const SparseRow& row, RowKind kind) {
  for (const auto& [c, v] : row.entries) {
    cols.push_back(c);
    vals.push_back(v);
  }
  row_ptr.push_back(cols.size());
  rhs.push_back(row.rhs);
  kinds.push_back(kind);
}

std::size_t LinearSystem::count(RowKind kind) const {
  std::size_t n_kind = 0;
  for (RowKind k : kinds) n_kind += (k == kind);
  return n_kind;
}

double LinearSystem::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += std::abs(vals[k]);
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> LinearSystem::multiply(const std::vector<double>& u) const {
  std::vector<double> out(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * u[cols[k]];
    out[r] = s;
  }
  return out;
}

std::vector<QuadratureSet> build_quadrature_sets(const Grid& grid, const ProblemCase& problem,
                                                 const NodeClassification& cls,
                                                 EFactorForm form) {
  std::vector<QuadratureSet> sets;
  sets.reserve(cls.cut_lines.size());
  for (const CutLine& c : cls.cut_lines)
    sets.push_back(build_quadrature_set(c.node, c.line, grid, problem.field, form));
  return sets;
}

LinearSystem assemble_system(const Grid& grid, const ProblemCase& problem,
                             const NodeClassification& cls, const AssemblyOptions& options) {
  const std::size_t n = grid.node_count();
  if (cls.tags.size() != n)
    throw Error(ErrorKind::Assembly, "classification does not match the grid");

  std::unordered_map<std::size_t, QuadratureSet> sets;
  if (options.scheme == Scheme::AsymptoticPreserving) {
    for (const CutLine& c : cls.cut_lines) {
      if (c.node >= n || cls.tags[c.node] != NodeTag::Cut)
        throw Error(ErrorKind::Assembly, "cut line attached to a node not tagged Cut");
      auto [it, inserted] = sets.emplace(
          c.node, build_quadrature_set(c.node, c.line, grid, problem.field, options.e_form));
      if (!inserted) throw Error(ErrorKind::Assembly, "two cut lines share one node");
    }
  }

  LinearSystem sys;
  sys.n = n;
  sys.rhs.reserve(n);
  sys.kinds.reserve(n);
  sys.row_ptr.reserve(n + 1);
  sys.cols.reserve(9 * n);
  sys.vals.reserve(9 * n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const NodeIndex node = grid.node(idx);
    const NodeTag tag = cls.tags[idx];
    if ((tag == NodeTag::Boundary) != grid.is_boundary(node)) {
      std::ostringstream msg;
      msg << "node (" << node.i << ", " << node.j << ") tagged " << to_string(tag)
          << " disagrees with the grid boundary";
      throw Error(ErrorKind::Assembly, msg.str());
    }
    if (tag == NodeTag::Boundary) {
      sys.push_row({{{idx, 1.0}}, problem.boundary(grid.point(node))}, RowKind::Dirichlet);
    } else if (tag == NodeTag::Cut && options.scheme == Scheme::AsymptoticPreserving) {
      auto it = sets.find(idx);
      if (it == sets.end()) throw Error(ErrorKind::Assembly, "Cut node without a traced line");
      sys.push_row(constraint_row(grid, problem, it->second), RowKind::Constraint);
    } else {
      sys.push_row(stencil_row(grid, problem, node.i, node.j), RowKind::Stencil);
    }
  }
  return sys;
}

void write_matrix_market(const LinearSystem& sys, std::ostream& matrix, std::ostream& rhs) {
  matrix << "%%MatrixMarket matrix coordinate real general\n";
  matrix << sys.n << ' ' << sys.n << ' ' << sys.nnz() << '\n';
  for (std::size_t r = 0; r < sys.n; ++r)
    for (std::size_t k = sys.row_ptr[r]; k < sys.row_ptr[r + 1]; ++k)
      matrix << r + 1 << ' ' << sys.cols[k] + 1 << ' ' << format_double(sys.vals[k]) << '\n';
  rhs << "%%MatrixMarket matrix array real general\n";
  rhs << sys.n << " 1\n";
  for (double v : sys.rhs) rhs << format_double(v) << '\n';
}

}  // namespace islandap
