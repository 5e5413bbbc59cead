#pragma once

// JSON and CSV serialization: grids, grid functions, weight configs, sparse
// families, domination certificates and verification reports. Non-finite
// numbers are written as the strings "inf", "-inf" and "nan".

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbmo/czo.hpp"
#include "wbmo/grid.hpp"
#include "wbmo/report.hpp"
#include "wbmo/sparse.hpp"
#include "wbmo/weights.hpp"

namespace wbmo::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double to_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw contract_violation("expected a number, got " + j.dump());
}

// ---------------------------------------------------------------------------
// Grids and functions

inline json grid_json(const DyadicGrid& g) {
  json o = {{"dimension", g.dimension}, {"side", g.side}, {"depth", g.depth}};
  o["origin"] = g.dimension == 1 ? json::array({g.origin[0]}) : json::array({g.origin[0], g.origin[1]});
  return o;
}

inline DyadicGrid grid_from_json(const json& j) {
  try {
    DyadicGrid g;
    g.dimension = j.at("dimension").get<int>();
    g.side = j.at("side").get<double>();
    g.depth = j.at("depth").get<int>();
    const auto& o = j.at("origin");
    require(o.is_array() && static_cast<int>(o.size()) == g.dimension, "grid origin must list one entry per axis");
    g.origin[0] = o[0].get<double>();
    if (g.dimension == 2) g.origin[1] = o[1].get<double>();
    g.validate();
    return g;
  } catch (const json::exception& e) {
    throw contract_violation(std::string("malformed grid: ") + e.what());
  }
}

/// {origin, side, dimension, depth, values} with values row-major at the finest level.
inline json function_json(const GridFunction& f) {
  json o = grid_json(f.grid());
  json v = json::array();
  for (double x : f.values()) v.push_back(number(x));
  o["values"] = std::move(v);
  return o;
}

inline GridFunction function_from_json(const json& j) {
  const DyadicGrid g = grid_from_json(j);
  const auto& v = j.at("values");
  require(v.is_array() && v.size() == g.cell_count(), "values must list every finest cell");
  std::vector<double> values;
  values.reserve(v.size());
  for (const auto& x : v) values.push_back(to_number(x));
  return GridFunction(g, std::move(values));
}

// ---------------------------------------------------------------------------
// Weight configs: {kind: "identity" | "power" | "step" | "lacunary" | "table", ...}

inline Weight weight_from_json(const json& j, const DyadicGrid& g) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    std::array<double, 2> center{0.0, 0.0};
    if (j.contains("center")) {
      const auto& c = j.at("center");
      center[0] = c.at(0).get<double>();
      if (c.size() > 1) center[1] = c.at(1).get<double>();
    }
    if (kind == "identity") return stock::identity(g);
    if (kind == "power") return stock::power(g, j.at("delta").get<double>(), center);
    if (kind == "step") return stock::step(g, j.value("high", 2.0));
    if (kind == "lacunary") return stock::lacunary(g, center);
    if (kind == "table") {
      const GridFunction f = function_from_json(j.at("function"));
      require(f.grid() == g, "table weight lives on a different grid");
      return Weight(f, j.value("label", std::string("table")));
    }
    throw contract_violation("unknown weight kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw contract_violation(std::string("malformed weight config: ") + e.what());
  }
}

inline json weight_json(const Weight& w) {
  json o = {{"label", w.label()}};
  if (const auto& law = w.power_law()) {
    o["kind"] = "power";
    o["delta"] = law->delta;
    o["center"] = json::array({law->center[0], law->center[1]});
  } else {
    o["kind"] = "table";
    o["function"] = function_json(w.values());
  }
  return o;
}

// ---------------------------------------------------------------------------
// Sparse families

inline json box_json(const RealBox& r, int d) {
  return d == 1 ? json::array({r.lo[0], r.hi[0]}) : json::array({r.lo[0], r.hi[0], r.lo[1], r.hi[1]});
}

inline RealBox box_from_json(const json& j, int d) {
  require(j.is_array() && static_cast<int>(j.size()) == 2 * d, "a box lists lo, hi per axis");
  return d == 1 ? RealBox::interval(j[0].get<double>(), j[1].get<double>())
                : RealBox{{j[0].get<double>(), j[2].get<double>()}, {j[1].get<double>(), j[3].get<double>()}};
}

inline json cube_json(const Cube& q, int d) {
  json idx = d == 1 ? json::array({q.index[0]}) : json::array({q.index[0], q.index[1]});
  return {{"level", q.level}, {"index", idx}};
}

/// Members with a dyadic address are written as {level, index}; other members
/// as {parts: [boxes]}.
inline json family_json(const SparseFamily& s) {
  const int d = s.grid.dimension;
  json members = json::array();
  for (const SparseMember& m : s.members) {
    if (m.cube) {
      members.push_back(cube_json(*m.cube, d));
      continue;
    }
    json parts = json::array();
    for (const RealBox& r : m.parts) parts.push_back(box_json(r, d));
    members.push_back({{"parts", parts}});
  }
  json o = {{"grid", grid_json(s.grid)}, {"eta", s.eta}, {"members", members}};
  if (s.witness) {
    json wit = json::array();
    for (const auto& e : *s.witness) {
      json sets = json::array();
      for (const RealBox& r : e) sets.push_back(box_json(r, d));
      wit.push_back(sets);
    }
    o["witness"] = wit;
  }
  return o;
}

inline SparseFamily family_from_json(const json& j) {
  try {
    SparseFamily s;
    s.grid = grid_from_json(j.at("grid"));
    s.eta = j.value("eta", 0.5);
    const int d = s.grid.dimension;
    for (const auto& m : j.at("members")) {
      if (m.contains("level")) {
        Cube q{m.at("level").get<int>(), {m.at("index").at(0).get<Index>(), d == 2 ? m.at("index").at(1).get<Index>() : 0}};
        s.members.push_back(cube_member(s.grid, q));
      } else {
        SparseMember mem;
        for (const auto& p : m.at("parts")) mem.parts.push_back(box_from_json(p, d));
        for (const RealBox& r : mem.parts) require(r.volume(d) > 0.0, "member parts must have positive volume");
        if (mem.parts.size() == 1) mem.cube = dyadic_address(s.grid, mem.parts[0]);
        s.members.push_back(std::move(mem));
      }
    }
    if (j.contains("witness")) {
      std::vector<std::vector<RealBox>> wit;
      for (const auto& e : j.at("witness")) {
        std::vector<RealBox> sets;
        for (const auto& r : e) sets.push_back(box_from_json(r, d));
        wit.push_back(std::move(sets));
      }
      s.witness = std::move(wit);
    }
    return s;
  } catch (const json::exception& e) {
    throw contract_violation(std::string("malformed sparse family: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Certificates and reports

inline json certificate_json(const DominationCertificate& c) {
  json margins = json::array();
  for (double m : c.margin) margins.push_back(number(m));
  json omegas = json::array();
  for (double w : c.omegas) omegas.push_back(number(w));
  return {{"family", family_json(c.family)},
          {"q0", cube_json(c.q0, c.family.grid.dimension)},
          {"lambda", c.lambda},
          {"median", number(c.median)},
          {"median_upper", number(c.median_upper)},
          {"omegas", omegas},
          {"margin", margins},
          {"min_margin", number(c.min_margin)},
          {"min_margin_upper", number(c.min_margin_upper)},
          {"worst_level_fraction", c.worst_level_fraction},
          {"sparsity_ok", c.sparsity.ok},
          {"sparsity_min_fraction", number(c.sparsity.min_fraction)},
          {"sound", c.sound()}};
}

inline json report_json(const VerificationReport& r) {
  return {{"check_id", r.check_id}, {"anchor", r.anchor},   {"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},   {"ratio", number(r.ratio)}, {"tolerance", r.tolerance},
          {"status", to_string(r.status)}, {"notes", r.notes}};
}

inline VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  r.check_id = j.at("check_id").get<std::string>();
  r.anchor = j.at("anchor").get<std::string>();
  r.lhs = to_number(j.at("lhs"));
  r.rhs = to_number(j.at("rhs"));
  r.ratio = to_number(j.at("ratio"));
  r.tolerance = j.at("tolerance").get<double>();
  const auto s = j.at("status").get<std::string>();
  if (s == "pass") r.status = CheckStatus::Pass;
  else if (s == "fail") r.status = CheckStatus::Fail;
  else if (s == "skipped") r.status = CheckStatus::Skipped;
  else throw contract_violation("unknown status '" + s + "'");
  r.notes = j.value("notes", std::string());
  return r;
}

/// {schema_version, summary, reports: [...]}.
inline json report_document(const ReportList& rows) {
  json list = json::array();
  std::size_t pass = 0, fail = 0, skipped = 0;
  for (const auto& r : rows) {
    list.push_back(report_json(r));
    if (r.status == CheckStatus::Pass) ++pass;
    else if (r.status == CheckStatus::Fail) ++fail;
    else ++skipped;
  }
  return {{"schema_version", kSchemaVersion},
          {"summary", {{"pass", pass}, {"fail", fail}, {"skipped", skipped}}},
          {"reports", list}};
}

/// Plot-ready table: a header row, then one row per record. Numbers are
/// written with 17 significant digits.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    require(row.size() == header.size(), "CSV row width differs from header");
    rows.push_back(std::move(row));
  }
  void merge(const CsvTable& other) {
    if (header.empty()) header = other.header;
    require(header == other.header, "CSV tables with different headers");
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }

  static std::string cell(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long long x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  static std::string cell(const char* s) { return cell(std::string(s)); }

  void write(std::ostream& os) const {
    write_row(os, header);
    for (const auto& r : rows) write_row(os, r);
  }

private:
  static void write_row(std::ostream& os, const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
};

/// Builds a CSV row from mixed values.
template <class... Ts>
std::vector<std::string> csv_row(const Ts&... xs) {
  return {CsvTable::cell(xs)...};
}

}  // namespace wbmo::io
