// SPDX-License-Identifier: MIT
/**
 * @file json_io.cpp
 * @brief JSON (de)serialization of processes, certificates and reports.
 */
#include "qproc/json_io.hpp"

#include <fstream>
#include <string>
#include <vector>

#include "qproc/certify.hpp"

namespace qproc {

namespace {

using nlohmann::json;

// ---- structural access (every failure is a ParseError) -------------------

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object around '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return f.get<int>();
}

bool bool_field(const json& j, const char* key, bool fallback) {
  const auto it = j.is_object() ? j.find(key) : j.end();
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw ParseError(std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

std::string string_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return f.get<std::string>();
}

std::vector<int> int_list(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<int> out;
  for (const json& e : f) {
    if (!e.is_number_integer()) throw ParseError(std::string("field '") + key + "' must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> double_list(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const json& e : f) {
    if (!e.is_number()) throw ParseError(std::string("field '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<HermitianOperator> operator_list(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_array()) throw ParseError(std::string("field '") + key + "' must be an array of matrices");
  std::vector<HermitianOperator> out;
  out.reserve(f.size());
  for (const json& e : f) out.push_back(operator_from_json(e));
  return out;
}

json operators_to_json(const std::vector<HermitianOperator>& ops) {
  json arr = json::array();
  for (const HermitianOperator& h : ops) arr.push_back(operator_to_json(h));
  return arr;
}

std::vector<double> vector_to_list(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// ---- per-kind process payloads -------------------------------------------

MultiSource multisource_from_json(const json& j) {
  MultiSource p;
  p.dim = int_field(j, "dim");
  p.n_settings = int_field(j, "n_settings");
  p.n_outcomes = int_field(j, "n_outcomes");
  p.states = operator_list(j, "states");
  p.assemblage = bool_field(j, "assemblage", false);
  if (j.contains("weights")) {
    p.weights = double_list(j, "weights");
  } else if (p.n_outcomes == 1) {
    p.weights.assign(p.states.size(), 1.0);
  } else {
    throw ParseError("missing field 'weights' (required unless n_outcomes == 1)");
  }
  return p;
}

MultiMeasurement multimeasurement_from_json(const json& j) {
  MultiMeasurement p;
  p.dim = int_field(j, "dim");
  p.n_settings = int_field(j, "n_settings");
  p.n_outcomes = int_field(j, "n_outcomes");
  p.effects = operator_list(j, "effects");
  return p;
}

BipartiteState bipartite_from_json(const json& j) {
  const std::vector<int> dims = int_list(j, "dims");
  if (dims.size() != 2) throw ParseError("field 'dims' must hold exactly two entries");
  return BipartiteState{dims[0], dims[1], operator_from_json(field(j, "rho"))};
}

MultipartiteState multipartite_from_json(const json& j) {
  return MultipartiteState{int_list(j, "dims"), operator_from_json(field(j, "rho"))};
}

ChannelChoi channel_from_json(const json& j) {
  return ChannelChoi{int_field(j, "d_in"), int_field(j, "d_out"),
                     operator_from_json(field(j, "choi"))};
}

MultiInstrument instrument_from_json(const json& j) {
  MultiInstrument p;
  p.dims_in = int_list(j, "dims_in");
  p.dims_out = int_list(j, "dims_out");
  p.n_settings = int_field(j, "n_settings");
  p.n_outcomes = int_field(j, "n_outcomes");
  p.chois = operator_list(j, "chois");
  p.two_comb = bool_field(j, "two_comb", false);
  return p;
}

// ---- certificate payloads ------------------------------------------------

json side_to_json(const SideFrames& s) {
  return json{{"frame", operators_to_json(s.frame)}, {"dual", operators_to_json(s.dual)}};
}

SideFrames side_from_json(const json& j) {
  SideFrames s;
  s.frame = operator_list(j, "frame");
  s.dual = operator_list(j, "dual");
  return s;
}

std::vector<SideFrames> side_list(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<SideFrames> out;
  out.reserve(f.size());
  for (const json& e : f) out.push_back(side_from_json(e));
  return out;
}

json witness_to_json(const Witness& w) {
  json j;
  j["rule"] = w.rule;
  j["detail"] = w.detail;
  if (w.dependence.size() > 0) j["dependence"] = vector_to_list(w.dependence);
  if (!w.bipartition.empty()) {
    j["npt_eigenvalue"] = w.npt_eigenvalue;
    j["bipartition"] = w.bipartition;
  }
  if (!w.steering_inequality.empty()) {
    j["steering_inequality"] = operators_to_json(w.steering_inequality);
    j["steering_violation"] = w.steering_violation;
  }
  if (!w.separator.empty()) {
    j["separator"] = operators_to_json(w.separator);
    j["margin"] = w.margin;
  }
  if (!w.probe.empty()) j["probe"] = w.probe;
  if (!w.inner_rule.empty()) j["inner_rule"] = w.inner_rule;
  return j;
}

}  // namespace

// --------------------------------------------------------------------------
// Matrices
// --------------------------------------------------------------------------

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t n_rows = j.size();
  std::size_t n_cols = 0;
  Eigen::MatrixXcd m;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty()) throw ParseError("matrix rows must be non-empty arrays");
    if (r == 0) {
      n_cols = row.size();
      m.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
    } else if (row.size() != n_cols) {
      throw ParseError("matrix rows must all have the same length");
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("matrix entries must be [re, im] number pairs");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          cdouble(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json operator_to_json(const HermitianOperator& h) { return matrix_to_json(h.mat()); }

HermitianOperator operator_from_json(const json& j) {
  const Eigen::MatrixXcd m = matrix_from_json(j);
  if (m.rows() != m.cols()) throw ParseError("operator payload must be a square matrix");
  return HermitianOperator(m);
}

// --------------------------------------------------------------------------
// Process documents
// --------------------------------------------------------------------------

json process_to_json(const Process& p) {
  json j;
  j["format"] = "qproc-process/1";
  j["kind"] = kind_name(p);
  struct Visitor {
    json& j;
    void operator()(const MultiSource& s) const {
      j["dim"] = s.dim;
      j["n_settings"] = s.n_settings;
      j["n_outcomes"] = s.n_outcomes;
      j["weights"] = s.weights;
      j["states"] = operators_to_json(s.states);
      j["assemblage"] = s.assemblage;
    }
    void operator()(const MultiMeasurement& m) const {
      j["dim"] = m.dim;
      j["n_settings"] = m.n_settings;
      j["n_outcomes"] = m.n_outcomes;
      j["effects"] = operators_to_json(m.effects);
    }
    void operator()(const BipartiteState& b) const {
      j["dims"] = b.dims();
      j["rho"] = operator_to_json(b.rho);
    }
    void operator()(const MultipartiteState& m) const {
      j["dims"] = m.dims;
      j["rho"] = operator_to_json(m.rho);
    }
    void operator()(const ChannelChoi& e) const {
      j["d_in"] = e.d_in;
      j["d_out"] = e.d_out;
      j["choi"] = operator_to_json(e.choi);
    }
    void operator()(const MultiInstrument& mi) const {
      j["dims_in"] = mi.dims_in;
      j["dims_out"] = mi.dims_out;
      j["n_settings"] = mi.n_settings;
      j["n_outcomes"] = mi.n_outcomes;
      j["chois"] = operators_to_json(mi.chois);
      j["two_comb"] = mi.two_comb;
    }
  };
  std::visit(Visitor{j}, p);
  return j;
}

Process process_from_json(const json& j) {
  const std::string format = string_field(j, "format");
  if (format != "qproc-process/1")
    throw ParseError("unsupported process format '" + format + "'");
  const std::string kind = string_field(j, "kind");
  if (kind == "multi_source") return multisource_from_json(j);
  if (kind == "multi_measurement") return multimeasurement_from_json(j);
  if (kind == "bipartite_state") return bipartite_from_json(j);
  if (kind == "multipartite_state") return multipartite_from_json(j);
  if (kind == "channel") return channel_from_json(j);
  if (kind == "multi_instrument") return instrument_from_json(j);
  throw ParseError("unknown process kind '" + kind + "'");
}

// --------------------------------------------------------------------------
// Certificate documents
// --------------------------------------------------------------------------

json certificate_to_json(const FrameCertificate& c, const std::string& theorem) {
  json j;
  j["format"] = "qproc-cert/1";
  j["kind"] = certificate_kind(c);
  j["theorem"] = theorem;
  struct Visitor {
    json& j;
    void operator()(const SourceCertificate& s) const {
      j["frame"] = operators_to_json(s.frame);
      j["dual"] = operators_to_json(s.dual);
    }
    void operator()(const MeasurementCertificate& m) const {
      j["parent"] = operators_to_json(m.parent);
      j["dual"] = operators_to_json(m.dual);
    }
    void operator()(const BipartiteCertificate& b) const {
      json sides = json::array();
      for (const SideFrames& s : b.sides) sides.push_back(side_to_json(s));
      j["sides"] = sides;
    }
    void operator()(const ChannelCertificate& c2) const {
      j["input"] = side_to_json(c2.input);
      j["output"] = side_to_json(c2.output);
    }
    void operator()(const GeneralCertificate& g) const {
      json inputs = json::array();
      for (const SideFrames& s : g.inputs) inputs.push_back(side_to_json(s));
      json outputs = json::array();
      for (const SideFrames& s : g.outputs) outputs.push_back(side_to_json(s));
      j["inputs"] = inputs;
      j["outputs"] = outputs;
    }
  };
  std::visit(Visitor{j}, c);
  return j;
}

FrameCertificate certificate_from_json(const json& j) {
  const std::string format = string_field(j, "format");
  if (format != "qproc-cert/1")
    throw ParseError("unsupported certificate format '" + format + "'");
  const std::string kind = string_field(j, "kind");
  if (kind == "source") {
    SourceCertificate c;
    c.frame = operator_list(j, "frame");
    c.dual = operator_list(j, "dual");
    return c;
  }
  if (kind == "measurement") {
    MeasurementCertificate c;
    c.parent = operator_list(j, "parent");
    c.dual = operator_list(j, "dual");
    return c;
  }
  if (kind == "bipartite") {
    BipartiteCertificate c;
    c.sides = side_list(j, "sides");
    return c;
  }
  if (kind == "channel") {
    ChannelCertificate c;
    c.input = side_from_json(field(j, "input"));
    c.output = side_from_json(field(j, "output"));
    return c;
  }
  if (kind == "general") {
    GeneralCertificate c;
    c.inputs = side_list(j, "inputs");
    c.outputs = side_list(j, "outputs");
    return c;
  }
  throw ParseError("unknown certificate kind '" + kind + "'");
}

// --------------------------------------------------------------------------
// Reports
// --------------------------------------------------------------------------

json verdict_to_json(const Verdict& v, const Process& p, double tolerance) {
  json j;
  j["format"] = "qproc-verdict/1";
  j["verdict"] = tag_name(v.tag);
  j["rule"] = v.rule;
  j["theorem"] = v.theorem;
  j["certificate_omitted"] = v.certificate_omitted;
  j["diagnostics"] = v.diagnostics;
  j["timing_ms"] = nullptr;
  if (v.certificate.has_value()) {
    j["certificate"] = certificate_to_json(*v.certificate, v.theorem);
    const VerifyReport report = verify_certificate(p, *v.certificate, tolerance);
    json checks = json::array();
    for (const CheckResult& c : report.checks)
      checks.push_back(json{{"name", c.name},
                            {"residual", c.residual},
                            {"tolerance", c.tolerance},
                            {"pass", c.pass}});
    j["checks"] = std::move(checks);
    j["checks_pass"] = report.pass;
  } else {
    j["certificate"] = nullptr;
    j["checks"] = json::array();
    j["checks_pass"] = nullptr;
  }
  j["witness"] = v.witness.has_value() ? witness_to_json(*v.witness) : json(nullptr);
  return j;
}

json identities_to_json(const IdentitySet& ids) {
  json j;
  j["format"] = "qproc-identities/1";
  j["labels"] = ids.index_labels;
  j["dimension"] = ids.dimension();
  json basis = json::array();
  for (const Eigen::VectorXd& v : ids.basis) basis.push_back(vector_to_list(v));
  j["basis"] = std::move(basis);
  return j;
}

// --------------------------------------------------------------------------
// Files
// --------------------------------------------------------------------------

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qproc
