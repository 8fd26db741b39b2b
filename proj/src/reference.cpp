#include "robust_cluster/reference.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "robust_cluster/error.hpp"

#ifndef ROBUST_CLUSTER_DEFAULT_DATA_DIR
#define ROBUST_CLUSTER_DEFAULT_DATA_DIR "data"
#endif

namespace robust_cluster {

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("ROBUST_CLUSTER_DATA_DIR"); env && *env) return env;
  return ROBUST_CLUSTER_DEFAULT_DATA_DIR;
}

ReferenceTables ReferenceTables::load(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ParseError("cannot open reference tables " + csv.string());
  ReferenceTables t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || lineno == 1) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string field; std::getline(ls, field, ',');) f.push_back(field);
    if (f.size() != 5) throw ParseError("expected 5 fields", lineno);
    ReferenceCell cell;
    try {
      cell.mean = std::stod(f[3]);
      cell.stderr_ = std::stod(f[4]);
    } catch (const std::exception&) {
      throw ParseError("mean/stderr are not numbers", lineno);
    }
    if (cell.mean < 0.0 || cell.mean > 1.0) throw ParseError("mean outside [0, 1]", lineno);
    if (cell.stderr_ < 0.0) throw ParseError("negative stderr", lineno);
    if (!t.cells_.emplace(std::tuple{f[0], f[1], f[2]}, cell).second)
      throw ParseError("duplicate cell", lineno);
    auto& sc = t.scenario_order_[f[0]];
    if (std::find(sc.begin(), sc.end(), f[1]) == sc.end()) sc.push_back(f[1]);
    auto& me = t.method_order_[f[0]];
    if (std::find(me.begin(), me.end(), f[2]) == me.end()) me.push_back(f[2]);
  }
  for (const auto& [table, sc] : t.scenario_order_)
    for (const auto& s : sc)
      for (const auto& m : t.method_order_[table])
        if (!t.contains(table, s, m))
          throw ParseError("incomplete grid: missing " + table + " / " + s + " / " + m);
  return t;
}

ReferenceTables ReferenceTables::load_default() {
  return load(data_dir() / "reference" / "published_tables.csv");
}

ReferenceCell ReferenceTables::lookup(const std::string& table, const std::string& scenario,
                                      const std::string& method) const {
  auto it = cells_.find({table, scenario, method});
  if (it == cells_.end())
    throw std::out_of_range("no reference cell " + table + " / " + scenario + " / " + method);
  return it->second;
}

bool ReferenceTables::contains(const std::string& table, const std::string& scenario,
                               const std::string& method) const {
  return cells_.count({table, scenario, method}) > 0;
}

std::vector<std::string> ReferenceTables::scenarios(const std::string& table) const {
  auto it = scenario_order_.find(table);
  return it == scenario_order_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> ReferenceTables::methods(const std::string& table) const {
  auto it = method_order_.find(table);
  return it == method_order_.end() ? std::vector<std::string>{} : it->second;
}

}  // namespace robust_cluster
