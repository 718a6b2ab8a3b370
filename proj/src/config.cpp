#include "islandap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "islandap/error.hpp"

namespace islandap {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& range) {
  throw Error(ErrorKind::InvalidConfig,
              "invalid value '" + value + "' for key '" + key + "': expected " + range);
}

double to_double(const std::string& key, const std::string& value, const std::string& range) {
  double v = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) bad(key, value, range);
  return v;
}

int to_int(const std::string& key, const std::string& value, const std::string& range) {
  int v = 0;
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(value.data(), last, v);
  if (res.ec != std::errc() || res.ptr != last) bad(key, value, range);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  bad(key, value, "true|false");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "problem", "gamma1",  "gamma2",      "phi",    "lambda",      "alpha",
      "eps",     "grids",   "scheme",      "method", "step_factor", "e_form",
      "equilibrate", "timing", "start",    "output", "dump_matrix", "dump_quadrature",
      "dump_fieldline"};
  return keys;
}

GridSize parse_grid(const std::string& token) {
  const std::string range = "N or IxJ with integers >= 2";
  const auto x = token.find('x');
  GridSize g;
  if (x == std::string::npos) {
    g.I = g.J = to_int("grids", token, range);
  } else {
    g.I = to_int("grids", token.substr(0, x), range);
    g.J = to_int("grids", token.substr(x + 1), range);
  }
  if (g.I < 2 || g.J < 2) bad("grids", token, range);
  return g;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorKind::InvalidConfig, "malformed config token '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      if (!kv.emplace(key, tok.substr(eq + 1)).second)
        throw Error(ErrorKind::InvalidConfig, "key '" + key + "' given twice");
    }
  }
  return kv;
}

RunConfig parse_config(const KeyValues& file_values, const KeyValues& overrides) {
  KeyValues kv = file_values;
  for (const auto& [k, v] : overrides) kv[k] = v;

  const auto& keys = config_keys();
  for (const auto& [k, v] : kv) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw Error(ErrorKind::InvalidConfig, "unknown config key '" + k + "'");
  }

  RunConfig cfg;
  auto get = [&kv](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (const auto* v = get("problem")) {
    if (*v == "example1")
      cfg.problem.kind = ProblemSpec::Kind::Example1;
    else if (*v == "example2")
      cfg.problem.kind = ProblemSpec::Kind::Example2;
    else
      bad("problem", *v, "example1|example2");
  }
  if (const auto* v = get("gamma1")) {
    cfg.problem.gamma1 = to_double("gamma1", *v, "a number > 0");
    if (!(cfg.problem.gamma1 > 0.0)) bad("gamma1", *v, "a number > 0");
  }
  if (const auto* v = get("gamma2")) {
    cfg.problem.gamma2 = to_double("gamma2", *v, "a number > 0");
    if (!(cfg.problem.gamma2 > 0.0)) bad("gamma2", *v, "a number > 0");
  }
  if (const auto* v = get("phi")) {
    const std::string range = "a number in [0, pi)";
    cfg.problem.phi = to_double("phi", *v, range);
    if (cfg.problem.phi < 0.0 || cfg.problem.phi >= std::numbers::pi) bad("phi", *v, range);
  }
  if (const auto* v = get("lambda")) {
    const std::string range = "a nonzero number";
    cfg.problem.lambda = to_double("lambda", *v, range);
    if (cfg.problem.lambda == 0.0) bad("lambda", *v, range);
  }
  if (const auto* v = get("alpha")) {
    cfg.problem.alpha = to_double("alpha", *v, "a number > 0");
    if (!(cfg.problem.alpha > 0.0)) bad("alpha", *v, "a number > 0");
  }
  if (const auto* v = get("eps")) {
    const std::string range = "comma-separated numbers in (0, 1]";
    cfg.eps.clear();
    for (const std::string& t : split(*v, ',')) {
      const double e = to_double("eps", t, range);
      if (!(e > 0.0 && e <= 1.0)) bad("eps", t, range);
      cfg.eps.push_back(e);
    }
    if (cfg.eps.empty()) bad("eps", *v, range);
  }
  if (const auto* v = get("grids")) {
    cfg.grids.clear();
    for (const std::string& t : split(*v, ',')) cfg.grids.push_back(parse_grid(t));
    if (cfg.grids.empty()) bad("grids", *v, "N or IxJ with integers >= 2");
  }
  if (const auto* v = get("scheme")) {
    if (*v == "ap")
      cfg.scheme = Scheme::AsymptoticPreserving;
    else if (*v == "baseline")
      cfg.scheme = Scheme::Baseline;
    else
      bad("scheme", *v, "ap|baseline");
  }
  if (const auto* v = get("method")) {
    if (*v == "one")
      cfg.method = TraceMethod::One;
    else if (*v == "two")
      cfg.method = TraceMethod::Two;
    else
      bad("method", *v, "one|two");
  }
  if (const auto* v = get("step_factor")) {
    const std::string range = "a number in (0, 1]";
    cfg.step_factor = to_double("step_factor", *v, range);
    if (!(cfg.step_factor > 0.0 && cfg.step_factor <= 1.0)) bad("step_factor", *v, range);
  }
  if (const auto* v = get("e_form")) {
    if (*v == "two_sided")
      cfg.e_form = EFactorForm::TwoSided;
    else if (*v == "one_sided")
      cfg.e_form = EFactorForm::OneSided;
    else
      bad("e_form", *v, "two_sided|one_sided");
  }
  if (const auto* v = get("equilibrate")) cfg.equilibrate = to_bool("equilibrate", *v);
  if (const auto* v = get("timing")) cfg.timing = to_bool("timing", *v);
  if (const auto* v = get("start")) {
    const std::string range = "x,y";
    const auto parts = split(*v, ',');
    if (parts.size() != 2) bad("start", *v, range);
    cfg.start = {to_double("start", parts[0], range), to_double("start", parts[1], range)};
  }
  if (const auto* v = get("output")) cfg.output = *v;
  if (const auto* v = get("dump_matrix")) cfg.dump_matrix = *v;
  if (const auto* v = get("dump_quadrature")) cfg.dump_quadrature = *v;
  if (const auto* v = get("dump_fieldline")) cfg.dump_fieldline = *v;
  return cfg;
}

RunConfig parse_config(const std::string& text) { return parse_config(parse_key_values(text)); }

StudyOptions RunConfig::study_options() const {
  StudyOptions o;
  o.scheme = scheme;
  o.tracer.step_factor = step_factor;
  o.tracer.cut_method = method;
  o.e_form = e_form;
  o.equilibrate_condition = equilibrate;
  o.timing = timing;
  return o;
}

}  // namespace islandap
