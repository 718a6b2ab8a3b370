#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "islandap/analysis.hpp"
#include "islandap/config.hpp"
#include "islandap/error.hpp"
#include "islandap/format.hpp"

using namespace islandap;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  return out;
}

/// Runs `body` with the output stream named by cfg.output, or stdout.
template <class F>
void with_output(const RunConfig& cfg, F&& body) {
  if (cfg.output.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out = open_out(cfg.output);
  body(out);
}

void write_quadrature_csv(const QuadratureSet& q, std::ostream& os, bool with_node) {
  os << (with_node ? "node,x,y,kind,omega,E\n" : "x,y,kind,omega,E\n");
  for (std::size_t k = 0; k < q.points.size(); ++k) {
    if (with_node) os << q.cut_node << ',';
    os << format_double(q.points[k].p.x) << ',' << format_double(q.points[k].p.y) << ','
       << to_string(q.points[k].kind) << ','
       << (k < q.weights.size() ? format_double(q.weights[k]) : std::string()) << ','
       << format_double(q.E[k]) << '\n';
  }
}

void require_single(const RunConfig& cfg, const char* command) {
  if (cfg.eps.size() != 1 || cfg.grids.size() != 1)
    throw Error(ErrorKind::InvalidConfig,
                std::string(command) + " needs exactly one eps and one grid");
}

int run_solve(const RunConfig& cfg) {
  require_single(cfg, "solve");
  const ProblemCase problem = cfg.problem.make(cfg.eps.front());
  const Grid grid =
      build_grid(problem.half_width, problem.half_height, cfg.grids[0].I, cfg.grids[0].J);
  StudyOptions opts = cfg.study_options();
  NodeClassification cls;
  if (opts.scheme == Scheme::AsymptoticPreserving) {
    cls = classify_nodes(grid, problem, opts.tracer);
  } else {
    cls.tags.assign(grid.node_count(), NodeTag::OpenInterior);
    for (std::size_t k = 0; k < cls.tags.size(); ++k)
      if (grid.is_boundary(grid.node(k))) cls.tags[k] = NodeTag::Boundary;
  }
  const CaseResult res = run_case(grid, problem, cls, opts);

  if (!cfg.dump_matrix.empty()) {
    std::ofstream m = open_out(cfg.dump_matrix + ".mtx");
    std::ofstream r = open_out(cfg.dump_matrix + "_rhs.mtx");
    write_matrix_market(res.system, m, r);
  }
  if (!cfg.dump_quadrature.empty() && opts.scheme == Scheme::AsymptoticPreserving) {
    std::ofstream q = open_out(cfg.dump_quadrature);
    bool header = true;
    for (const QuadratureSet& set : build_quadrature_sets(grid, problem, cls, opts.e_form)) {
      std::ostringstream part;
      write_quadrature_csv(set, part, true);
      std::string text = part.str();
      if (!header) text.erase(0, text.find('\n') + 1);
      q << text;
      header = false;
    }
  }

  with_output(cfg, [&](std::ostream& os) {
    os << "i,j,x,y,tag,u" << (problem.has_exact() ? ",exact" : "") << '\n';
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
      const NodeIndex n = grid.node(k);
      const Vec2 p = grid.point(n);
      os << n.i << ',' << n.j << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
         << to_string(cls.tags[k]) << ',' << format_double(res.solve.solution[k]);
      if (problem.has_exact()) os << ',' << format_double(problem.exact(p));
      os << '\n';
    }
  });
  std::cerr << problem.label << " " << to_string(opts.scheme) << " I=" << grid.I()
            << " J=" << grid.J() << " eps=" << format_double(cfg.eps.front())
            << " residual=" << format_double(res.solve.residual_norm);
  if (res.errors)
    std::cerr << " l2=" << format_double(res.errors->l2)
              << " linf=" << format_double(res.errors->linf);
  std::cerr << '\n';
  return 0;
}

int run_study_command(const RunConfig& cfg, bool condition) {
  StudyOptions opts = cfg.study_options();
  opts.condition = condition;
  const ConvergenceReport report = run_study(cfg.problem, cfg.eps, cfg.grids, opts);
  with_output(cfg, [&](std::ostream& os) { write_csv(report, os); });
  int code = 0;
  for (const ReportRow& r : report.rows) {
    if (r.error.empty()) continue;
    std::cerr << "row eps=" << format_double(r.eps) << " I=" << r.I << " J=" << r.J
              << " failed: " << r.error << '\n';
    code = kExitNumerical;
  }
  return code;
}

int run_trace(const RunConfig& cfg, bool quadrature) {
  const ProblemCase problem = cfg.problem.make(cfg.eps.front());
  const Grid grid =
      build_grid(problem.half_width, problem.half_height, cfg.grids[0].I, cfg.grids[0].J);
  const double h = std::min(grid.hx(), grid.hy());
  const double step = cfg.step_factor * h;
  const FieldLine line = cfg.method == TraceMethod::One
                             ? trace_method_one(cfg.start, problem.field, step, h, grid)
                             : trace_method_two(cfg.start, problem.field, step, h, grid);
  std::cerr << "trace " << to_string(line.method) << " from (" << format_double(cfg.start.x)
            << ", " << format_double(cfg.start.y) << "): "
            << (line.kind == LineKind::Closed ? "closed" : "open")
            << " length=" << format_double(line_length(line)) << " points=" << line.points.size()
            << '\n';

  std::ostream* quad_os = nullptr;
  std::ofstream quad_file;
  if (quadrature) {
    if (line.kind != LineKind::Closed) {
      throw Error(ErrorKind::TraceFailure, "quadrature requested for an open field line");
    }
    if (cfg.dump_quadrature.empty()) {
      quad_os = &std::cout;
    } else {
      quad_file = open_out(cfg.dump_quadrature);
      quad_os = &quad_file;
    }
  }

  if (!quadrature || !cfg.dump_fieldline.empty() || !cfg.output.empty()) {
    auto emit = [&](std::ostream& os) {
      os << "x,y,s\n";
      double s = 0.0;
      for (std::size_t k = 0; k < line.points.size(); ++k) {
        if (k > 0) s += distance(line.points[k - 1], line.points[k]);
        os << format_double(line.points[k].x) << ',' << format_double(line.points[k].y) << ','
           << format_double(s) << '\n';
      }
    };
    const std::string& path = cfg.dump_fieldline.empty() ? cfg.output : cfg.dump_fieldline;
    if (path.empty()) {
      emit(std::cout);
    } else {
      std::ofstream out = open_out(path);
      emit(out);
    }
  }
  if (quad_os) {
    const std::size_t node = grid.index(static_cast<int>(std::lround(cfg.start.x / grid.hx())),
                                        static_cast<int>(std::lround(cfg.start.y / grid.hy())));
    write_quadrature_csv(build_quadrature_set(node, line, grid, problem.field, cfg.e_form),
                         *quad_os, false);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic-preserving solver for anisotropic diffusion with closed field lines"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "key=value config file")->check(CLI::ExistingFile);

  std::map<std::string, std::string> flag_values;
  for (const std::string& key : config_keys())
    app.add_option("--" + key, flag_values[key], "overrides config key '" + key + "'");

  auto* solve_cmd = app.add_subcommand("solve", "solve one case and write node values");
  auto* conv_cmd = app.add_subcommand("convergence", "error and EOC table over eps x grids");
  auto* cond_cmd = app.add_subcommand("condition", "condition numbers over eps x grids");
  auto* trace_cmd = app.add_subcommand("trace", "trace one field line");
  bool quadrature = false;
  trace_cmd->add_flag("--quadrature", quadrature, "write the quadrature points of the line");
  for (auto* sub : {solve_cmd, conv_cmd, cond_cmd, trace_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    KeyValues overrides;
    for (const std::string& key : config_keys())
      if (app.count("--" + key) > 0) overrides[key] = flag_values[key];
    const KeyValues file_values =
        config_path.empty() ? KeyValues{} : parse_key_values(read_file(config_path));
    const RunConfig cfg = parse_config(file_values, overrides);

    if (*solve_cmd) return run_solve(cfg);
    if (*conv_cmd) return run_study_command(cfg, false);
    if (*cond_cmd) return run_study_command(cfg, true);
    return run_trace(cfg, quadrature);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::InvalidConfig) return kExitConfig;
    if (e.kind() == ErrorKind::Io) return 1;
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
