#include "copo/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace copo {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits on `sep` outside square brackets.
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '[')
      ++depth;
    else if (ch == ']')
      --depth;
    if (ch == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_number(std::string_view text, const std::string& what) {
  const std::string s = trim(text);
  if (s.empty())
    throw ConfigError(what + ": empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(what + ": not a finite number: '" + s + "'");
  return v;
}

long to_integer(std::string_view text, const std::string& what) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError(what + ": not an integer: '" + s + "'");
  return v;
}

void sort_params(std::vector<Param>& v) {
  auto rank = [](Param p) { return p == Param::Delta ? 0 : p == Param::Tau ? 1 : p == Param::Theta ? 2 : 3; };
  std::sort(v.begin(), v.end(), [&](Param a, Param b) { return rank(a) < rank(b); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

AxisSpec parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("axis '" + std::string(text) + "': expected name=min:max:count");
  AxisSpec a;
  try {
    a.param = parse_param(trim(text.substr(0, eq)));
  } catch (const ParamError& e) {
    throw ConfigError(std::string("axis: ") + e.what());
  }
  const std::string body = trim(text.substr(eq + 1));
  const std::string what = "axis " + to_string(a.param);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']')
      throw ConfigError(what + ": unterminated value list");
    for (const auto& v : split_top(std::string_view(body).substr(1, body.size() - 2), ','))
      a.values.push_back(to_number(v, what));
    if (a.values.empty())
      throw ConfigError(what + ": empty value list");
    return a;
  }
  const auto parts = split_top(body, ':');
  if (parts.size() != 3 && parts.size() != 4)
    throw ConfigError(what + ": expected min:max:count[:open]");
  a.min = to_number(parts[0], what);
  a.max = to_number(parts[1], what);
  const long n = to_integer(parts[2], what);
  if (n < 1 || n > 100000000)
    throw ConfigError(what + ": count must be >= 1");
  a.count = static_cast<int>(n);
  if (parts.size() == 4) {
    if (parts[3] != "open")
      throw ConfigError(what + ": unknown axis option '" + parts[3] + "'");
    a.include_max = false;
  }
  if (a.min > a.max)
    throw ConfigError(what + ": min > max");
  return a;
}

void apply_axis_override(std::vector<AxisSpec>& axes, const AxisSpec& a) {
  for (auto& x : axes)
    if (x.param == a.param) {
      x = a;
      return;
    }
  axes.push_back(a);
}

std::vector<Param> RunConfig::optimized() const {
  std::vector<Param> v = optimize_over;
  if (!delta)
    v.push_back(Param::Delta);
  if (!tau)
    v.push_back(Param::Tau);
  if (!theta)
    v.push_back(Param::Theta);
  sort_params(v);
  return v;
}

SweepSpec RunConfig::to_sweep_spec() const {
  SweepSpec s;
  s.name = name;
  s.axes = axes;
  s.fixed = params;
  s.single_sided_phase = single_sided_phase;
  s.delta = delta.value_or(0.0);
  s.theta = theta.value_or(0.0);
  s.tau = tau.value_or(0.0);
  s.tau_is_phase = tau_is_phase;
  s.optimize_over = optimized();
  s.bounds = bounds;
  s.minimizer = minimizer;
  s.objectives = objectives;
  try {
    s.validate();
  } catch (const ParamError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, std::pair<std::string, int>> kv; // section.key -> (value, line)

  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "sweep" && section != "optimize")
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (!kv.emplace(full, std::make_pair(value, lineno)).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
  }

  auto ctx = [&](const std::string& key) {
    return "line " + std::to_string(kv.at(key).second) + ": " + key;
  };
  auto number = [&](const std::string& key) { return to_number(kv.at(key).first, ctx(key)); };
  auto auto_or_number = [&](const std::string& key) -> std::optional<double> {
    if (kv.at(key).first == "auto")
      return std::nullopt;
    return number(key);
  };
  auto has = [&](const std::string& key) { return kv.count(key) != 0; };

  static const std::set<std::string> known = {
      "name", "k", "R", "R_x", "R_y", "phi_x", "phi_y", "dphi", "g", "eta", "pumping",
      "single_sided_phase", "delta", "theta", "tau", "tau_units", "out", "precision", "seed",
      "sweep.axes", "sweep.objective",
      "optimize.over", "optimize.delta_min", "optimize.delta_max", "optimize.grid",
      "optimize.rounds", "optimize.ftol"};
  for (const auto& [key, v] : kv) {
    if (!known.count(key))
      throw ConfigError("line " + std::to_string(v.second) + ": unknown key '" + key + "'");
    cfg.keys_set.insert(key);
  }
  if (has("R") && (has("R_x") || has("R_y")))
    throw ConfigError(ctx("R") + ": conflicts with R_x/R_y");
  if (has("dphi") && has("phi_y"))
    throw ConfigError(ctx("dphi") + ": conflicts with phi_y");

  SystemParams& p = cfg.params;
  if (has("name"))
    cfg.name = kv.at("name").first;
  if (has("k")) {
    const long k = to_integer(kv.at("k").first, ctx("k"));
    if (k < 1 || k > 64)
      throw ConfigError(ctx("k") + ": must be in [1, 64]");
    p.k = static_cast<int>(k);
  }
  if (has("R"))
    p.R_x = p.R_y = number("R");
  if (has("R_x"))
    p.R_x = number("R_x");
  if (has("R_y"))
    p.R_y = number("R_y");
  if (has("phi_x"))
    p.phi_x = number("phi_x");
  if (has("phi_y"))
    p.phi_y = number("phi_y");
  if (has("dphi"))
    p.phi_y = p.phi_x + number("dphi");
  if (has("g"))
    p.g = number("g");
  if (has("eta"))
    p.eta = number("eta");
  if (has("pumping")) {
    const std::string& v = kv.at("pumping").first;
    if (v == "independent")
      p.pumping = Pumping::Independent;
    else if (v == "single-sided")
      p.pumping = Pumping::SingleSided;
    else
      throw ConfigError(ctx("pumping") + ": expected independent or single-sided");
  }
  if (has("single_sided_phase")) {
    const std::string& v = kv.at("single_sided_phase").first;
    if (v == "coupling")
      cfg.single_sided_phase = SingleSidedPhase::FromCoupling;
    else if (v == "stated")
      cfg.single_sided_phase = SingleSidedPhase::Stated;
    else
      throw ConfigError(ctx("single_sided_phase") + ": expected coupling or stated");
  }
  if (p.pumping == Pumping::SingleSided && (has("R_y") || has("phi_y") || has("dphi")))
    throw ConfigError("single-sided pumping derives R_y and phi_y; do not set them");
  if (has("delta"))
    cfg.delta = auto_or_number("delta");
  if (has("theta"))
    cfg.theta = auto_or_number("theta");
  if (has("tau"))
    cfg.tau = auto_or_number("tau");
  if (has("tau_units")) {
    const std::string& v = kv.at("tau_units").first;
    if (v == "time")
      cfg.tau_is_phase = false;
    else if (v == "phase")
      cfg.tau_is_phase = true;
    else
      throw ConfigError(ctx("tau_units") + ": expected time or phase");
  }
  if (has("out"))
    cfg.out = kv.at("out").first;
  if (has("precision")) {
    const long n = to_integer(kv.at("precision").first, ctx("precision"));
    if (n < 1 || n > 17)
      throw ConfigError(ctx("precision") + ": must be in [1, 17]");
    cfg.precision = static_cast<int>(n);
  }
  if (has("seed")) {
    const long n = to_integer(kv.at("seed").first, ctx("seed"));
    if (n < 0)
      throw ConfigError(ctx("seed") + ": must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(n);
  }

  if (has("sweep.axes"))
    for (const auto& a : split_top(kv.at("sweep.axes").first, ';')) {
      if (a.empty())
        continue;
      try {
        apply_axis_override(cfg.axes, parse_axis(a));
      } catch (const ConfigError& e) {
        throw ConfigError(ctx("sweep.axes") + ": " + e.what());
      }
    }
  if (has("sweep.objective")) {
    cfg.objectives.clear();
    for (const auto& o : split_top(kv.at("sweep.objective").first, ','))
      try {
        cfg.objectives.push_back(parse_objective(o));
      } catch (const ParamError& e) {
        throw ConfigError(ctx("sweep.objective") + ": " + e.what());
      }
  }
  if (has("optimize.over"))
    for (const auto& o : split_top(kv.at("optimize.over").first, ',')) {
      if (o.empty())
        continue;
      try {
        cfg.optimize_over.push_back(parse_param(o));
      } catch (const ParamError& e) {
        throw ConfigError(ctx("optimize.over") + ": " + e.what());
      }
    }
  if (has("optimize.delta_min"))
    cfg.bounds.delta_min = number("optimize.delta_min");
  if (has("optimize.delta_max"))
    cfg.bounds.delta_max = number("optimize.delta_max");
  if (has("optimize.grid")) {
    const long n = to_integer(kv.at("optimize.grid").first, ctx("optimize.grid"));
    if (n < 64 || n > 100000)
      throw ConfigError(ctx("optimize.grid") + ": must be in [64, 100000]");
    cfg.minimizer.grid = static_cast<int>(n);
  }
  if (has("optimize.rounds")) {
    const long n = to_integer(kv.at("optimize.rounds").first, ctx("optimize.rounds"));
    if (n < 1 || n > 8)
      throw ConfigError(ctx("optimize.rounds") + ": must be in [1, 8]");
    cfg.minimizer.max_rounds = static_cast<int>(n);
  }
  if (has("optimize.ftol")) {
    cfg.minimizer.ftol = number("optimize.ftol");
    if (!(cfg.minimizer.ftol > 0.0))
      throw ConfigError(ctx("optimize.ftol") + ": must be > 0");
  }

  for (Param q : cfg.optimize_over)
    if (q != Param::Delta && q != Param::Tau && q != Param::Theta)
      throw ConfigError("optimize.over: only delta, tau and theta can be optimised");
  for (Param q : cfg.optimized())
    for (const auto& a : cfg.axes)
      if (a.param == q)
        throw ConfigError("parameter " + to_string(q) + " is both swept and optimised");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f)
    throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

} // namespace copo
