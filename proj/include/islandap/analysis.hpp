#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "islandap/classification.hpp"
#include "islandap/discretization.hpp"
#include "islandap/solver.hpp"

namespace islandap {

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Linf = max |u_h - exact| over all nodes; L2 = sqrt(hx hy sum (u_h - exact)^2).
ErrorNorms error_norms(const std::vector<double>& u, const std::function<double(Vec2)>& exact,
                       const Grid& grid);

/// order_k = log(e_k / e_{k+1}) / log(h_k / h_{k+1}); empty where undefined.
std::vector<std::optional<double>> eoc(const std::vector<double>& errors,
                                       const std::vector<double>& h);

/// Benchmark selector plus its parameters; `make` builds the case for one epsilon.
struct ProblemSpec {
  enum class Kind { Example1, Example2 };
  Kind kind = Kind::Example1;
  double gamma1 = 0.5;
  double gamma2 = 0.5;
  double phi = 0.0;
  double lambda = 0.1;
  double alpha = 1.0;

  ProblemCase make(double epsilon) const;
  std::string name() const;
};

struct GridSize {
  int I = 16;
  int J = 16;
};

struct StudyOptions {
  Scheme scheme = Scheme::AsymptoticPreserving;
  TracerParams tracer{};
  EFactorForm e_form = EFactorForm::TwoSided;
  bool condition = false;
  bool equilibrate_condition = true;
  /// Grids with at most this many nodes get the exact inverse norm; larger ones the estimator.
  std::size_t dense_condition_limit = 65 * 65;
  bool timing = false;
};

struct CaseResult {
  LinearSystem system;
  SolveReport solve;
  std::optional<ErrorNorms> errors;
  std::optional<double> cond;
};

/// Assembles and solves one case on a pre-computed classification.
CaseResult run_case(const Grid& grid, const ProblemCase& problem, const NodeClassification& cls,
                    const StudyOptions& options);

struct ReportRow {
  std::string problem;
  std::string scheme;
  std::string method;
  double eps = 0.0;
  int I = 0;
  int J = 0;
  double hx = 0.0;
  double hy = 0.0;
  std::optional<double> l2;
  std::optional<double> linf;
  std::optional<double> eoc_l2;
  std::optional<double> eoc_linf;
  std::optional<double> cond;
  std::optional<double> wall_ms;
  std::string error;  // empty on success
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;  // ordered by (eps, grid) in input order

  /// Rows of one epsilon, in grid order.
  std::vector<const ReportRow*> for_eps(double eps) const;
  bool all_ok() const;
};

/// Full cross-product of eps and grids. Classification is computed once per grid and
/// shared by every epsilon; a failing row keeps its message and the study continues.
ConvergenceReport run_study(const ProblemSpec& spec, const std::vector<double>& eps_list,
                            const std::vector<GridSize>& grids, const StudyOptions& options);

/// Header problem,scheme,method,eps,I,J,hx,hy,l2,linf,eoc_l2,eoc_linf,cond,wall_ms.
void write_csv(const ConvergenceReport& report, std::ostream& os);

}  // namespace islandap
