#pragma once

#include <map>
#include <string>
#include <vector>

#include "islandap/analysis.hpp"

namespace islandap {

/// Validated run configuration. Every field maps to one key of the flat key=value
/// format and to one command-line flag of the same name.
struct RunConfig {
  ProblemSpec problem;
  std::vector<double> eps{1e-6};
  std::vector<GridSize> grids{{32, 32}};
  Scheme scheme = Scheme::AsymptoticPreserving;
  TraceMethod method = TraceMethod::Two;
  double step_factor = 0.25;
  EFactorForm e_form = EFactorForm::TwoSided;
  bool equilibrate = true;
  bool timing = false;
  Vec2 start{-0.25, 0.0};
  std::string output;         // CSV path, empty for stdout
  std::string dump_matrix;    // path prefix for .mtx files
  std::string dump_quadrature;
  std::string dump_fieldline;

  StudyOptions study_options() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Splits config text into key=value pairs. Pairs are separated by whitespace or
/// newlines; '#' starts a comment. Throws ErrorKind::InvalidConfig on malformed tokens
/// or repeated keys.
KeyValues parse_key_values(const std::string& text);

/// Applies `overrides` on top of `file_values` and validates the result.
/// Unknown keys and out-of-range values throw ErrorKind::InvalidConfig naming the key
/// and its accepted range.
RunConfig parse_config(const KeyValues& file_values, const KeyValues& overrides = {});
RunConfig parse_config(const std::string& text);

/// Names of all accepted keys.
const std::vector<std::string>& config_keys();

/// "N" for an N x N grid or "IxJ".
GridSize parse_grid(const std::string& token);

}  // namespace islandap
