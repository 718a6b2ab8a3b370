#include "islandap/analysis.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "islandap/error.hpp"
#include "islandap/format.hpp"

namespace islandap {

ErrorNorms error_norms(const std::vector<double>& u, const std::function<double(Vec2)>& exact,
                       const Grid& grid) {
  if (u.size() != grid.node_count())
    throw Error(ErrorKind::InvalidConfig, "solution length does not match the grid");
  ErrorNorms n;
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double e = std::abs(u[k] - exact(grid.point(grid.node(k))));
    n.linf = std::max(n.linf, e);
    sum += e * e;
  }
  n.l2 = std::sqrt(grid.hx() * grid.hy() * sum);
  return n;
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors,
                                       const std::vector<double>& h) {
  std::vector<std::optional<double>> out;
  const std::size_t n = std::min(errors.size(), h.size());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double e0 = errors[k];
    const double e1 = errors[k + 1];
    const double r = h[k] / h[k + 1];
    if (!(e0 > 0.0) || !(e1 > 0.0) || !(r > 0.0) || r == 1.0 || !std::isfinite(e0) ||
        !std::isfinite(e1)) {
      out.emplace_back();
      continue;
    }
    out.emplace_back(std::log(e0 / e1) / std::log(r));
  }
  return out;
}

ProblemCase ProblemSpec::make(double epsilon) const {
  if (kind == Kind::Example1) return example1_case(gamma1, gamma2, phi, epsilon, alpha);
  return example2_case(lambda, epsilon, alpha);
}

std::string ProblemSpec::name() const { return make(1.0).label; }

CaseResult run_case(const Grid& grid, const ProblemCase& problem, const NodeClassification& cls,
                    const StudyOptions& options) {
  CaseResult out;
  out.system = assemble_system(grid, problem, cls, {options.scheme, options.e_form});
  out.solve = solve(out.system);
  if (problem.has_exact()) out.errors = error_norms(out.solve.solution, problem.exact, grid);
  if (options.condition) {
    const ConditionMode mode = grid.node_count() <= options.dense_condition_limit
                                   ? ConditionMode::Dense
                                   : ConditionMode::Iterative;
    out.cond = condition_estimate(out.system, mode, options.equilibrate_condition);
    out.solve.cond_estimate = out.cond;
  }
  return out;
}

std::vector<const ReportRow*> ConvergenceReport::for_eps(double eps) const {
  std::vector<const ReportRow*> out;
  for (const ReportRow& r : rows)
    if (r.eps == eps) out.push_back(&r);
  return out;
}

bool ConvergenceReport::all_ok() const {
  for (const ReportRow& r : rows)
    if (!r.error.empty()) return false;
  return true;
}

ConvergenceReport run_study(const ProblemSpec& spec, const std::vector<double>& eps_list,
                            const std::vector<GridSize>& grids, const StudyOptions& options) {
  if (eps_list.empty() || grids.empty())
    throw Error(ErrorKind::InvalidConfig, "study needs at least one eps and one grid");
  const std::string name = spec.name();
  const char* method = options.scheme == Scheme::Baseline
                           ? "none"
                           : to_string(options.tracer.cut_method);

  ConvergenceReport report;
  report.rows.resize(eps_list.size() * grids.size());
  for (std::size_t g = 0; g < grids.size(); ++g) {
    std::optional<Grid> grid;
    std::optional<NodeClassification> cls;
    std::string setup_error;
    double setup_ms = 0.0;
    try {
      const ProblemCase probe = spec.make(eps_list.front());
      grid.emplace(build_grid(probe.half_width, probe.half_height, grids[g].I, grids[g].J));
      const auto t0 = std::chrono::steady_clock::now();
      if (options.scheme == Scheme::AsymptoticPreserving) {
        cls = classify_nodes(*grid, probe, options.tracer);
      } else {
        NodeClassification plain;
        plain.tags.resize(grid->node_count(), NodeTag::OpenInterior);
        for (std::size_t k = 0; k < plain.tags.size(); ++k)
          if (grid->is_boundary(grid->node(k))) plain.tags[k] = NodeTag::Boundary;
        cls = std::move(plain);
      }
      setup_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
    } catch (const std::exception& e) {
      setup_error = e.what();
    }

    for (std::size_t k = 0; k < eps_list.size(); ++k) {
      ReportRow& row = report.rows[k * grids.size() + g];
      row.problem = name;
      row.scheme = to_string(options.scheme);
      row.method = method;
      row.eps = eps_list[k];
      row.I = grids[g].I;
      row.J = grids[g].J;
      if (grid) {
        row.hx = grid->hx();
        row.hy = grid->hy();
      }
      if (!setup_error.empty()) {
        row.error = setup_error;
        continue;
      }
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const ProblemCase problem = spec.make(eps_list[k]);
        const CaseResult res = run_case(*grid, problem, *cls, options);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (res.errors) {
          row.l2 = res.errors->l2;
          row.linf = res.errors->linf;
        }
        row.cond = res.cond;
        if (options.timing) row.wall_ms = ms + setup_ms;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  }

  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    for (std::size_t g = 1; g < grids.size(); ++g) {
      const ReportRow& prev = report.rows[k * grids.size() + g - 1];
      ReportRow& row = report.rows[k * grids.size() + g];
      if (!prev.l2 || !row.l2) continue;
      const std::vector<double> h{prev.hx, row.hx};
      row.eoc_l2 = eoc({*prev.l2, *row.l2}, h).front();
      row.eoc_linf = eoc({*prev.linf, *row.linf}, h).front();
    }
  }
  return report;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

void write_csv(const ConvergenceReport& report, std::ostream& os) {
  os << "problem,scheme,method,eps,I,J,hx,hy,l2,linf,eoc_l2,eoc_linf,cond,wall_ms\n";
  for (const ReportRow& r : report.rows) {
    os << csv_field(r.problem) << ',' << r.scheme << ',' << r.method << ','
       << format_double(r.eps) << ',' << r.I << ',' << r.J << ',' << format_double(r.hx) << ','
       << format_double(r.hy) << ',' << opt(r.l2) << ',' << opt(r.linf) << ','
       << opt(r.eoc_l2) << ',' << opt(r.eoc_linf) << ',' << opt(r.cond) << ','
       << opt(r.wall_ms) << '\n';
  }
}

}  // namespace islandap
