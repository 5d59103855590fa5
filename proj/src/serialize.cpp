// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "latmap/errors.hpp"
#include "latmap/walsh.hpp"

namespace latmap {

namespace {

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Validation, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.is_object() && j.contains(key) ? get<T>(j, key) : fallback;
}

Json coupling_to_json(const Coupling& c) {
  if (c.is_infinite()) return "inf";
  return c.value();
}

Coupling coupling_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Coupling::infinity();
    fail(ErrorKind::Validation, "coupling must be a number or \"inf\"");
  }
  if (!j.is_number()) fail(ErrorKind::Validation, "coupling must be a number or \"inf\"");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ErrorKind::Validation, "coupling must be finite");
  return Coupling(v);
}

TermKind kind_from_string(const std::string& s) {
  if (s == "parity") return TermKind::ParityIsing;
  if (s == "clock") return TermKind::ClockCosine;
  if (s == "table") return TermKind::GeneralTable;
  fail(ErrorKind::Validation, "unknown term kind '" + s + "'");
}

}  // namespace

Json model_to_json(const SpinModel& m) {
  Json j;
  j["num_spins"] = m.num_spins();
  j["levels"] = m.levels;
  Json terms = Json::array();
  for (const auto& t : m.terms) {
    Json tj;
    tj["support"] = t.support;
    tj["kind"] = to_string(t.kind);
    if (t.kind == TermKind::GeneralTable) {
      tj["table"] = t.table;
      if (!t.coupling.is_infinite() && t.coupling.value() != 1.0) tj["coupling"] = coupling_to_json(t.coupling);
    } else {
      tj["coupling"] = coupling_to_json(t.coupling);
    }
    if (!t.weights.empty()) tj["weights"] = t.weights;
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  j["offset"] = m.energy_offset;
  j["log2_prefactor"] = m.log2_prefactor;
  return j;
}

SpinModel model_from_json(const Json& j) {
  SpinModel m;
  const int n = get<int>(j, "num_spins");
  require(n >= 0, ErrorKind::Validation, "num_spins must be >= 0");
  if (j.contains("levels")) {
    m.levels = get<std::vector<int>>(j, "levels");
  } else {
    m.levels.assign(n, 2);
  }
  require(static_cast<int>(m.levels.size()) == n, ErrorKind::Validation, "levels must list num_spins entries");
  const Json& terms = j.contains("terms") ? j.at("terms") : Json::array();
  require(terms.is_array(), ErrorKind::Validation, "terms must be an array");
  for (const auto& tj : terms) {
    InteractionTerm t;
    t.support = get<std::vector<int>>(tj, "support");
    t.kind = kind_from_string(get_or<std::string>(tj, "kind", tj.contains("table") ? "table" : "parity"));
    if (t.kind == TermKind::GeneralTable) {
      t.table = get<std::vector<double>>(tj, "table");
      t.coupling = tj.contains("coupling") ? coupling_from_json(tj.at("coupling")) : Coupling(1.0);
    } else {
      require(tj.contains("coupling"), ErrorKind::Validation, "term needs a coupling");
      t.coupling = coupling_from_json(tj.at("coupling"));
    }
    t.weights = get_or<std::vector<int>>(tj, "weights", {});
    m.terms.push_back(std::move(t));
  }
  m.energy_offset = get_or<double>(j, "offset", 0.0);
  m.log2_prefactor = get_or<int>(j, "log2_prefactor", 0);
  m.validate();
  return m;
}

Json geometry_to_json(const LatticeGeometry& g) {
  Json j;
  j["dims"] = g.extents();
  j["boundary"] = to_string(g.boundary());
  return j;
}

LatticeGeometry geometry_from_json(const Json& j) {
  const auto dims = get<std::vector<int>>(j, "dims");
  for (int d : dims) require(d >= 0, ErrorKind::Validation, "dims must be >= 0");
  return LatticeGeometry(dims, boundary_from_string(get_or<std::string>(j, "boundary", "open")));
}

Json trace_to_json(const RewriteTrace& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries) {
    Json ej;
    ej["rule"] = e.rule;
    ej["target"] = e.target;
    ej["param"] = e.param ? Json(*e.param) : Json(nullptr);
    entries.push_back(std::move(ej));
  }
  Json j;
  j["entries"] = std::move(entries);
  j["offset"] = t.offset;
  j["log2_factor"] = t.log2_factor;
  return j;
}

RewriteTrace trace_from_json(const Json& j) {
  RewriteTrace t;
  const Json& entries = j.is_array() ? j : j.at("entries");
  require(entries.is_array(), ErrorKind::Validation, "trace must be a list of entries");
  for (const auto& ej : entries) {
    TraceEntry e;
    e.rule = get<std::string>(ej, "rule");
    e.target = get<int>(ej, "target");
    if (ej.contains("param") && !ej.at("param").is_null()) e.param = get<double>(ej, "param");
    t.entries.push_back(std::move(e));
  }
  if (j.is_object()) {
    t.offset = get_or<double>(j, "offset", 0.0);
    t.log2_factor = get_or<int>(j, "log2_factor", 0);
  }
  return t;
}

Json instance_to_json(const CompiledInstance& inst) {
  const auto& g = inst.geometry();
  Json j;
  j["dims"] = g.extents();
  j["boundary"] = to_string(g.boundary());
  j["backend"] = to_string(inst.backend);
  j["mode"] = inst.mode;
  Json faces = Json::array();
  for (std::size_t f = 0; f < inst.faces.roles.size(); ++f) {
    Json fj;
    fj["id"] = f;
    fj["role"] = to_string(inst.faces.roles[f]);
    if (inst.faces.roles[f] == FaceRole::Finite) fj["J"] = inst.faces.couplings[f];
    faces.push_back(std::move(fj));
  }
  j["faces"] = std::move(faces);
  Json fixed = Json::array();
  for (const auto& fe : inst.faces.fixed) fixed.push_back({{"id", fe.edge}, {"provenance", to_string(fe.provenance)}});
  j["fixed_edges"] = std::move(fixed);
  Json lm = Json::object();
  for (std::size_t i = 0; i < inst.logical_map.size(); ++i) lm[std::to_string(i)] = inst.logical_map[i];
  j["logical_map"] = std::move(lm);
  j["source_faces"] = inst.source_faces;
  Json tf = Json::array();
  for (const auto& t : inst.term_faces) tf.push_back({{"support", t.support}, {"face", t.face}});
  j["term_faces"] = std::move(tf);
  j["trace"] = trace_to_json(inst.trace)["entries"];
  j["accounting"] = {{"pow2", inst.accounting.pow2}, {"offset", inst.accounting.offset}};
  if (inst.qlevel) {
    j["qlevel"] = {{"levels", inst.qlevel->levels},
                   {"penalty", inst.qlevel->penalty},
                   {"beta_min", inst.qlevel->beta_min}};
  }
  return j;
}

CompiledInstance instance_from_json(const Json& j) {
  CompiledInstance inst;
  inst.faces.geometry = geometry_from_json(j);
  const auto& g = inst.faces.geometry;
  inst.backend = backend_from_string(get<std::string>(j, "backend"));
  inst.mode = get_or<std::string>(j, "mode", "direct");
  const int nf = g.num_faces();
  inst.faces.roles.assign(nf, FaceRole::Delete);
  inst.faces.couplings.assign(nf, 0.0);
  std::vector<char> seen(nf, 0);
  const Json& faces = j.at("faces");
  require(faces.is_array(), ErrorKind::Validation, "faces must be an array");
  for (const auto& fj : faces) {
    const int id = get<int>(fj, "id");
    require(id >= 0 && id < nf, ErrorKind::Validation, "face id " + std::to_string(id) + " out of range");
    require(!seen[id], ErrorKind::Validation, "face " + std::to_string(id) + " listed twice");
    seen[id] = 1;
    inst.faces.roles[id] = role_from_string(get<std::string>(fj, "role"));
    if (inst.faces.roles[id] == FaceRole::Finite) inst.faces.couplings[id] = get<double>(fj, "J");
  }
  for (const auto& ej : j.at("fixed_edges")) {
    inst.faces.fixed.push_back(
        {get<int>(ej, "id"), provenance_from_string(get_or<std::string>(ej, "provenance", "gauge"))});
  }
  const Json& lm = j.at("logical_map");
  if (lm.is_array()) {
    inst.logical_map = lm.get<std::vector<int>>();
  } else {
    inst.logical_map.assign(lm.size(), -1);
    for (auto it = lm.begin(); it != lm.end(); ++it) {
      int i = -1;
      try {
        i = std::stoi(it.key());
      } catch (const std::exception&) {
        fail(ErrorKind::Validation, "logical_map keys must be spin indices");
      }
      require(i >= 0 && i < static_cast<int>(lm.size()), ErrorKind::Validation, "logical_map keys must be dense");
      inst.logical_map[i] = it.value().get<int>();
    }
  }
  for (int e : inst.logical_map) {
    require(e >= 0 && e < g.num_edges(), ErrorKind::Validation, "logical edge out of range");
  }
  inst.source_faces = get_or<std::vector<int>>(j, "source_faces", std::vector<int>(inst.logical_map.size(), -1));
  if (j.contains("term_faces")) {
    for (const auto& tj : j.at("term_faces")) {
      inst.term_faces.push_back({get<std::vector<int>>(tj, "support"), get<int>(tj, "face")});
    }
  }
  if (j.contains("trace")) inst.trace = trace_from_json(j.at("trace"));
  if (j.contains("accounting")) {
    inst.accounting.pow2 = get<int>(j.at("accounting"), "pow2");
    inst.accounting.offset = get<double>(j.at("accounting"), "offset");
  }
  inst.trace.offset = inst.accounting.offset;
  inst.trace.log2_factor = -static_cast<int>(inst.faces.fixed.size());
  if (j.contains("qlevel")) {
    const Json& q = j.at("qlevel");
    inst.qlevel = QLevelInfo{get<std::vector<int>>(q, "levels"), get<double>(q, "penalty"), get<double>(q, "beta_min")};
  }
  return inst;
}

Json report_to_json(const VerifyReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"beta", row.beta},
                    {"log_Z_target", row.log_z_target},
                    {"log_Z_instance", row.log_z_instance},
                    {"log_ratio", row.log_ratio},
                    {"residual", row.residual}});
  }
  Json j;
  j["pass"] = r.pass;
  j["fit"] = {{"a", r.a}, {"c", r.c}};
  j["accounting"] = {{"pow2", r.expected.pow2}, {"offset", r.expected.offset}};
  j["rows"] = std::move(rows);
  j["max_residual"] = r.max_residual;
  j["max_residual_beta"] = r.max_residual_beta;
  j["penalty_bound"] = r.penalty_bound;
  j["terms_match"] = r.terms_match;
  j["accounting_match"] = r.accounting_match;
  j["message"] = r.message;
  return j;
}

Json vector_to_json(const std::vector<double>& v) {
  return {{"index_convention", kIndexConvention}, {"values", v}};
}

std::vector<double> vector_from_json(const Json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  const auto conv = get<std::string>(j, "index_convention");
  require(conv == kIndexConvention, ErrorKind::Validation, "unknown index convention '" + conv + "'");
  return get<std::vector<double>>(j, "values");
}

Json incidence_to_json(const DenseGf2& a) {
  Json entries = Json::array();
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      if (a.get(r, c)) entries.push_back({r, c});
    }
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"entries", std::move(entries)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Validation, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Validation, "cannot write '" + path + "'");
    out << text;
    require(static_cast<bool>(out), ErrorKind::Validation, "write to '" + path + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(ErrorKind::Validation, "cannot move output into '" + path + "'");
  }
}

}  // namespace latmap
