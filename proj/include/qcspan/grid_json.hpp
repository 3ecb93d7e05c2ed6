#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcspan/decomposition.hpp"
#include "qcspan/domination.hpp"
#include "qcspan/errors.hpp"
#include "qcspan/grid.hpp"
#include "qcspan/io.hpp"
#include "qcspan/span_probe.hpp"

namespace qcspan {

using json = nlohmann::ordered_json;

// Grid JSON, bit-exact: {"x": [...], "y": [...], "values"|"mass": [[...]]}
// with every number written as a rational string and rows ordered bottom to
// top. Unknown fields are rejected.

namespace detail {

inline Rational rational_from_json(const json& v, const char* where) {
  if (!v.is_string())
    fail(Errc::MalformedJson, std::string(where) + " entries must be rational strings");
  Rational r;
  if (!try_parse_rational(v.get<std::string>(), r))
    fail(Errc::BadRational, "cannot parse '" + v.get<std::string>() + "' in " + where);
  return r;
}

inline std::vector<Rational> axis_from_json(const json& arr, const char* axis) {
  if (!arr.is_array()) fail(Errc::MalformedJson, std::string(axis) + " must be an array");
  std::vector<Rational> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(rational_from_json(v, axis));
  return out;
}

inline RationalMatrix matrix_from_json(const json& rows, const char* field) {
  if (!rows.is_array() || rows.empty())
    fail(Errc::MalformedJson, std::string(field) + " must be a nonempty array of rows");
  RationalMatrix m(rows.size(), rows.front().is_array() ? rows.front().size() : 0);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto& row = rows[j];
    if (!row.is_array() || row.size() != m.cols())
      fail(Errc::MalformedJson, std::string(field) + " rows must be arrays of equal length");
    for (std::size_t i = 0; i < m.cols(); ++i) m(j, i) = rational_from_json(row[i], field);
  }
  return m;
}

}  // namespace detail

inline GridFunction grid_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::MalformedJson, "grid document must be an object");
  bool has_values = false, has_mass = false;
  for (const auto& [key, _] : j.items()) {
    if (key == "x" || key == "y") continue;
    if (key == "values") {
      has_values = true;
      continue;
    }
    if (key == "mass") {
      has_mass = true;
      continue;
    }
    fail(Errc::MalformedJson, "unexpected field '" + key + "'");
  }
  if (!j.contains("x") || !j.contains("y"))
    fail(Errc::MalformedJson, "grid document needs 'x' and 'y'");
  if (has_values == has_mass)
    fail(Errc::MalformedJson, "grid document needs exactly one of 'values' or 'mass'");

  std::vector<Rational> xs = detail::axis_from_json(j.at("x"), "x");
  std::vector<Rational> ys = detail::axis_from_json(j.at("y"), "y");
  Mesh mesh = [&]() {
    try {
      return Mesh(std::move(xs), std::move(ys));
    } catch (const Error& e) {
      fail(Errc::MeshInvalid, e.what());
    }
  }();

  try {
    if (has_values)
      return GridFunction::from_values(std::move(mesh),
                                       detail::matrix_from_json(j.at("values"), "values"));
    return GridFunction::from_mass(mesh, detail::matrix_from_json(j.at("mass"), "mass"));
  } catch (const Error& e) {
    if (e.code() == Errc::DimensionMismatch) fail(Errc::MalformedJson, e.what());
    throw;
  }
}

inline json axis_to_json(const std::vector<Rational>& axis) {
  json arr = json::array();
  for (const Rational& r : axis) arr.push_back(format_rational(r));
  return arr;
}

inline json matrix_to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t j = 0; j < m.rows(); ++j) {
    json row = json::array();
    for (std::size_t i = 0; i < m.cols(); ++i) row.push_back(format_rational(m(j, i)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json grid_to_json(const GridFunction& G, bool as_mass = false) {
  json j;
  j["x"] = axis_to_json(G.mesh().xs());
  j["y"] = axis_to_json(G.mesh().ys());
  if (as_mass)
    j["mass"] = matrix_to_json(G.mass().cells);
  else
    j["values"] = matrix_to_json(G.values());
  return j;
}

inline GridFunction load_grid(const std::string& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedJson, std::string(e.what()) + " in '" + path + "'");
  }
  return grid_from_json(doc);
}

// --- result documents ---

inline json validation_to_json(const ValidationReport& rep) {
  json j;
  j["is_grounded"] = rep.is_grounded;
  j["has_uniform_marginals"] = rep.has_uniform_marginals;
  j["is_increasing"] = rep.is_increasing;
  j["is_lipschitz"] = rep.is_lipschitz;
  j["is_two_increasing"] = rep.is_two_increasing;
  j["is_quasi_copula"] = rep.is_quasi_copula();
  j["is_copula"] = rep.is_copula();
  json vio = json::array();
  for (const auto& v : rep.violations) {
    json e;
    e["property"] = v.property;
    e["i"] = v.i;
    e["j"] = v.j;
    e["witness"] = v.witness;
    vio.push_back(std::move(e));
  }
  j["violations"] = std::move(vio);
  return j;
}

inline json affine_pair_to_json(const AffinePair& p) {
  json j;
  j["alpha1"] = format_rational(p.alpha1);
  j["C1"] = grid_to_json(p.C1);
  j["alpha2"] = format_rational(p.alpha2);
  j["C2"] = grid_to_json(p.C2);
  return j;
}

inline json domination_to_json(const DominationResult& r) {
  json j;
  j["alpha"] = format_rational(r.alpha());
  j["attained_on"] = r.detail.attained_on_column ? "column" : "row";
  j["attained_index"] = r.detail.strip_index;
  j["lower"] = grid_to_json(r.lower);
  j["upper"] = grid_to_json(r.upper);
  j["witness"] = grid_to_json(r.witness);
  return j;
}

inline json norm_witness_to_json(const NormWitness& w) {
  json j;
  j["norm"] = format_rational(w.norm);
  j["s"] = format_rational(w.s);
  j["t"] = format_rational(w.t);
  j["A"] = grid_to_json(w.A);
  j["B"] = grid_to_json(w.B);
  return j;
}

inline json span_report_to_json(const SpanReport& rep, const std::string& family) {
  json j;
  j["verdict"] = verdict_name(rep.verdict);
  j["family"] = family;
  j["alpha_estimate"] = format_rational(rep.alpha_estimate);
  j["norm_estimate"] = format_rational(rep.norm_estimate);
  j["heuristic"] = true;
  j["evidence"] = rep.evidence;
  json levels = json::array();
  for (const auto& e : rep.alphas) {
    json l;
    l["level"] = e.level;
    l["max_gap"] = format_rational(e.max_gap);
    l["alpha"] = format_rational(e.alpha);
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  return j;
}

inline void write_json_atomic(const std::string& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace qcspan
