#include "copo/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace copo {

namespace {

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"')
      ch = ch == ',' ? ';' : ' ';
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    out.push_back(cell);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

nlohmann::json axis_json(const AxisSpec& a) {
  nlohmann::json j;
  j["name"] = to_string(a.param);
  if (a.values.empty()) {
    j["min"] = a.min;
    j["max"] = a.max;
    j["count"] = a.count;
    j["include_max"] = a.include_max;
  } else {
    j["values"] = a.values;
  }
  return j;
}

} // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "k",     "R_x", "R_y",    "dphi",  "g",      "eta",      "delta",
      "theta", "tau", "I",      "I_sum", "I_product", "n",     "m",
      "c",     "cprime", "nu_ppt", "regime", "physicality_margin", "error"};
  return cols;
}

std::string format_number(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string error_cell(const SweepRow& row) {
  std::string s;
  for (const auto& f : row.flags) {
    if (!s.empty())
      s += ';';
    s += "flag:" + f;
  }
  if (!row.error.empty()) {
    if (!s.empty())
      s += ';';
    s += "error:" + sanitize(row.error);
  }
  return s;
}

void write_csv(std::ostream& os, const SweepResult& r, int precision) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << '\n';
  const SweepSpec& s = r.spec;
  auto num = [&](double v) { return format_number(v, precision); };
  for (const SweepRow& row : r.rows) {
    const SystemParams& p = row.params;
    os << p.k << ',' << num(p.R_x) << ',' << num(p.R_y) << ',' << num(p.dphi()) << ','
       << num(p.g) << ',' << num(p.eta) << ',' << num(row.delta) << ',' << num(row.theta) << ','
       << num(row.tau) << ',';
    auto cell = [&](Objective o, double v) {
      if (row.ok() && s.records(o))
        os << num(v);
      os << ',';
    };
    cell(Objective::I, row.result.I);
    cell(Objective::I_sum, row.result.I_sum);
    cell(Objective::I_product, row.result.I_product);
    cell(Objective::n, row.n);
    cell(Objective::m, row.m);
    cell(Objective::c, row.c);
    cell(Objective::cprime, row.cprime);
    cell(Objective::nu_ppt, row.result.nu_ppt);
    if (row.ok() && s.records(Objective::regime))
      os << to_string(row.regime);
    os << ',';
    if (row.ok())
      os << num(row.physicality_margin);
    os << ',' << error_cell(row) << '\n';
  }
}

void write_csv_file(const std::string& path, const SweepResult& r, int precision) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(f, r, precision);
  if (!f)
    throw std::runtime_error("write to '" + path + "' failed");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  throw std::out_of_range("missing column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return std::stod(rows.at(row).at(column(name)));
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("empty CSV");
  t.header = split_line(line);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty())
      continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size())
      throw std::runtime_error("ragged CSV row at line " + std::to_string(lineno));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(f);
}

std::string metadata_json(const SweepResult& r) {
  const SweepSpec& s = r.spec;
  nlohmann::json j;
  j["code_version"] = r.metadata.code_version;
  j["calibration"] = r.metadata.calibration;
  j["optimizer_order"] = r.metadata.optimizer_order;
  j["timestamp"] = r.metadata.timestamp;
  j["rows"] = r.rows.size();

  nlohmann::json spec;
  spec["name"] = s.name;
  spec["axes"] = nlohmann::json::array();
  for (const auto& a : s.axes)
    spec["axes"].push_back(axis_json(a));
  const SystemParams& p = s.fixed;
  spec["fixed"] = {{"k", p.k},     {"R_x", p.R_x},         {"R_y", p.R_y},
                   {"phi_x", p.phi_x}, {"phi_y", p.phi_y}, {"g", p.g},
                   {"eta", p.eta}, {"pumping", to_string(p.pumping)}};
  spec["single_sided_phase"] = to_string(s.single_sided_phase);
  spec["delta"] = s.delta;
  spec["theta"] = s.theta;
  spec["tau"] = s.tau;
  spec["tau_units"] = s.tau_is_phase ? "phase" : "time";
  spec["optimize_over"] = nlohmann::json::array();
  for (Param q : s.optimize_over)
    spec["optimize_over"].push_back(to_string(q));
  spec["delta_min"] = s.bounds.delta_min;
  if (s.bounds.delta_max >= 0.0)
    spec["delta_max"] = s.bounds.delta_max;
  else
    spec["delta_max"] = "auto";
  spec["minimizer"] = {{"grid", s.minimizer.grid},
                       {"max_rounds", s.minimizer.max_rounds},
                       {"ftol", s.minimizer.ftol},
                       {"xtol", s.minimizer.xtol}};
  spec["objective"] = nlohmann::json::array();
  for (Objective o : s.objectives)
    spec["objective"].push_back(to_string(o));
  j["spec"] = spec;
  return j.dump(2);
}

void write_metadata_file(const std::string& csv_path, const SweepResult& r) {
  std::ofstream f(csv_path + ".json");
  if (!f)
    throw std::runtime_error("cannot open '" + csv_path + ".json' for writing");
  f << metadata_json(r) << '\n';
}

} // namespace copo
