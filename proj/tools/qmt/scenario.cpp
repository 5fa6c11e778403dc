// Copyright 2026 qmstransport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmt::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected string");
  return j.get<std::string>();
}

double number_or(const json& obj, const std::string& key, double def, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? def : number(*it, path + "." + key);
}

int integer_or(const json& obj, const std::string& key, int def, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? def : integer(*it, path + "." + key);
}

bool flag_or(const json& obj, const std::string& key, bool def, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return def;
  if (!it->is_boolean()) fail(path + "." + key, "expected boolean");
  return it->get<bool>();
}

void reject_unknown(const json& obj, const std::vector<std::string>& keys,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      fail(path + "." + it.key(), "unknown field");
}

RMat real_matrix(const json& j, const std::string& path) {
  Mat m = parse_matrix(j, path);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) fail(path, "expected real matrix");
  return m.real();
}

json real_matrix_json(const RMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Vec real_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected non-empty array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

json vector_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json normalize_builder(const json& s, const std::string& path) {
  const std::string name = text(field(s, "builder", path), path + ".builder");
  const json params = s.contains("params") ? s.at("params") : json::object();
  const std::string pp = path + ".params";
  if (!params.is_object()) fail(pp, "expected object");
  json out = {{"builder", name}};
  json p = json::object();
  if (name == "depolarizing") {
    reject_unknown(params, {"gamma", "n", "matrix_units"}, pp);
    p["gamma"] = number_or(params, "gamma", 1.0, pp);
    p["n"] = integer_or(params, "n", 2, pp);
    p["matrix_units"] = flag_or(params, "matrix_units", false, pp);
  } else if (name == "hypercube" || name == "fermion_ou") {
    reject_unknown(params, {"n"}, pp);
    p["n"] = integer_or(params, "n", name == "hypercube" ? 2 : 1, pp);
  } else if (name == "random_lindblad") {
    reject_unknown(params, {"n", "seed"}, pp);
    p["n"] = integer_or(params, "n", 2, pp);
    p["seed"] = integer_or(params, "seed", 1, pp);
  } else if (name == "markov_graph" || name == "markov_lindblad") {
    reject_unknown(params, {"q", "pi"}, pp);
    RMat q = real_matrix(field(params, "q", pp), pp + ".q");
    p["q"] = real_matrix_json(q);
    p["pi"] = params.contains("pi") ? vector_json(real_vector(params.at("pi"), pp + ".pi"))
                                    : vector_json(Vec::Constant(q.rows(), 1.0 / q.rows()));
  } else if (name == "lindblad") {
    reject_unknown(params, {"V", "sigma"}, pp);
    const json& V = field(params, "V", pp);
    if (!V.is_array() || V.empty()) fail(pp + ".V", "expected non-empty array of matrices");
    json vs = json::array();
    for (size_t k = 0; k < V.size(); ++k)
      vs.push_back(matrix_json(parse_matrix(V[k], pp + ".V[" + std::to_string(k) + "]")));
    p["V"] = vs;
    p["sigma"] = matrix_json(parse_matrix(field(params, "sigma", pp), pp + ".sigma"));
  } else {
    fail(path + ".builder", "unknown builder '" + name + "'");
  }
  out["params"] = p;
  return out;
}

json normalize_explicit(const json& s, const std::string& path) {
  reject_unknown(s, {"algebra", "directions", "sigma"}, path);
  const json& a = field(s, "algebra", path);
  const std::string ap = path + ".algebra";
  json alg;
  const std::string kind = text(field(a, "kind", ap), ap + ".kind");
  if (kind == "full" || kind == "clifford") {
    reject_unknown(a, {"kind", "n"}, ap);
    alg = {{"kind", kind}, {"n", integer(field(a, "n", ap), ap + ".n")}};
  } else if (kind == "diagonal") {
    reject_unknown(a, {"kind", "n", "weights"}, ap);
    if (a.contains("weights")) {
      alg = {{"kind", kind}, {"weights", vector_json(real_vector(a.at("weights"), ap + ".weights"))}};
    } else {
      const int n = integer(field(a, "n", ap), ap + ".n");
      alg = {{"kind", kind}, {"weights", vector_json(Vec::Constant(n, 1.0 / n))}};
    }
  } else {
    fail(ap + ".kind", "unknown algebra kind '" + kind + "'");
  }
  const json& dirs = field(s, "directions", path);
  if (!dirs.is_array()) fail(path + ".directions", "expected array");
  json nd = json::array();
  for (size_t j = 0; j < dirs.size(); ++j) {
    const std::string dp = path + ".directions[" + std::to_string(j) + "]";
    const json& d = dirs[j];
    reject_unknown(d, {"V", "omega", "ell", "r", "jstar", "label"}, dp);
    json o;
    o["V"] = matrix_json(parse_matrix(field(d, "V", dp), dp + ".V"));
    o["omega"] = number_or(d, "omega", 0.0, dp);
    for (const char* h : {"ell", "r"}) {
      std::string v = d.contains(h) ? text(d.at(h), dp + "." + h) : "identity";
      if (v != "identity" && v != "parity") fail(dp + "." + h, "expected 'identity' or 'parity'");
      o[h] = v;
    }
    o["jstar"] = integer(field(d, "jstar", dp), dp + ".jstar");
    o["label"] = d.contains("label") ? text(d.at("label"), dp + ".label") : "V" + std::to_string(j);
    nd.push_back(o);
  }
  json out = {{"algebra", alg}, {"directions", nd}};
  if (s.contains("sigma")) out["sigma"] = matrix_json(parse_matrix(s.at("sigma"), path + ".sigma"));
  return out;
}

json normalize_theta(const json& t, const std::string& path) {
  if (t.is_null()) return {{"kind", "default"}};
  const std::string kind = text(field(t, "kind", path), path + ".kind");
  if (kind == "default" || kind == "logarithmic") {
    reject_unknown(t, {"kind"}, path);
    return {{"kind", kind}};
  }
  if (kind == "power") {
    reject_unknown(t, {"kind", "m", "beta"}, path);
    return {{"kind", kind}, {"m", number(field(t, "m", path), path + ".m")},
            {"beta", number_or(t, "beta", 0.0, path)}};
  }
  if (kind == "tilted_log") {
    reject_unknown(t, {"kind", "beta"}, path);
    return {{"kind", kind}, {"beta", number(field(t, "beta", path), path + ".beta")}};
  }
  fail(path + ".kind", "unknown theta kind '" + kind + "'");
}

json normalize_task(const json& t, const std::string& path) {
  const std::string cmd = text(field(t, "cmd", path), path + ".cmd");
  json o = {{"cmd", cmd}};
  if (cmd == "validate") {
    reject_unknown(t, {"cmd"}, path);
  } else if (cmd == "distance") {
    reject_unknown(t, {"cmd", "endpoints", "grid_n", "max_iter", "primal_tol", "eps_boundary",
                       "richardson"},
                   path);
    const json& e = field(t, "endpoints", path);
    if (!e.is_array() || e.empty()) fail(path + ".endpoints", "expected non-empty array");
    json es = json::array();
    for (size_t k = 0; k < e.size(); ++k)
      es.push_back(matrix_json(parse_matrix(e[k], path + ".endpoints[" + std::to_string(k) + "]")));
    o["endpoints"] = es;
    DistanceOptions d;
    o["grid_n"] = integer_or(t, "grid_n", d.grid_n, path);
    o["max_iter"] = integer_or(t, "max_iter", d.max_iter, path);
    o["primal_tol"] = number_or(t, "primal_tol", d.primal_tol, path);
    o["eps_boundary"] = number_or(t, "eps_boundary", d.eps_boundary, path);
    o["richardson"] = flag_or(t, "richardson", d.richardson, path);
  } else if (cmd == "ricci") {
    reject_unknown(t, {"cmd", "samples", "boundary_samples", "refine", "refine_evals"}, path);
    RicciScanOptions r;
    o["samples"] = integer_or(t, "samples", r.samples, path);
    o["boundary_samples"] = integer_or(t, "boundary_samples", r.boundary_samples, path);
    o["refine"] = integer_or(t, "refine", r.refine, path);
    o["refine_evals"] = integer_or(t, "refine_evals", r.refine_evals, path);
  } else if (cmd == "inequalities") {
    reject_unknown(t, {"cmd", "ricci_samples", "mlsi_samples", "boundary_samples",
                       "transport_samples", "grid_n", "refine_evals"},
                   path);
    ReportOptions r;
    o["ricci_samples"] = integer_or(t, "ricci_samples", r.ricci.samples, path);
    o["mlsi_samples"] = integer_or(t, "mlsi_samples", r.mlsi.samples, path);
    o["boundary_samples"] = integer_or(t, "boundary_samples", r.mlsi.boundary_samples, path);
    o["transport_samples"] = integer_or(t, "transport_samples", r.transport_samples, path);
    o["grid_n"] = integer_or(t, "grid_n", r.distance.grid_n, path);
    o["refine_evals"] = integer_or(t, "refine_evals", r.mlsi.refine_evals, path);
  } else if (cmd == "evolve") {
    reject_unknown(t, {"cmd", "rho0", "t_max", "steps"}, path);
    if (t.contains("rho0")) o["rho0"] = matrix_json(parse_matrix(t.at("rho0"), path + ".rho0"));
    o["t_max"] = number_or(t, "t_max", 2.0, path);
    o["steps"] = integer_or(t, "steps", 40, path);
  } else if (cmd == "geodesic") {
    reject_unknown(t, {"cmd", "rho0", "A0", "T", "steps", "abort_eig"}, path);
    o["rho0"] = matrix_json(parse_matrix(field(t, "rho0", path), path + ".rho0"));
    o["A0"] = matrix_json(parse_matrix(field(t, "A0", path), path + ".A0"));
    GeodesicOptions g;
    o["T"] = number_or(t, "T", g.T, path);
    o["steps"] = integer_or(t, "steps", 200, path);
    o["abort_eig"] = number_or(t, "abort_eig", g.abort_eig, path);
  } else {
    fail(path + ".cmd", "unknown command '" + cmd + "'");
  }
  for (const char* k : {"grid_n", "max_iter", "samples", "steps", "ricci_samples", "mlsi_samples",
                        "transport_samples"})
    if (o.contains(k) && o[k].get<int>() < 1) fail(path + "." + k, "must be positive");
  return o;
}

std::string line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Mat parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected non-empty array of rows");
  const size_t n = j.size();
  Mat m(n, n);
  for (size_t r = 0; r < n; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != n) fail(rp, "expected row of length " + std::to_string(n));
    for (size_t c = 0; c < n; ++c) {
      const json& e = j[r][c];
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = cplx(number(e[0], ep + "[0]"), number(e[1], ep + "[1]"));
      } else {
        fail(ep, "expected number or [re, im]");
      }
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) fail(ep, "not finite");
    }
  }
  return m;
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Scenario normalize(const json& raw) {
  if (!raw.is_object()) fail("scenario", "expected object");
  reject_unknown(raw, {"structure", "theta", "tasks", "output", "seed"}, "scenario");
  json n;
  const json& s = field(raw, "structure", "scenario");
  if (!s.is_object()) fail("scenario.structure", "expected object");
  if (s.contains("builder")) {
    reject_unknown(s, {"builder", "params"}, "scenario.structure");
    n["structure"] = normalize_builder(s, "scenario.structure");
  } else if (s.contains("explicit")) {
    reject_unknown(s, {"explicit"}, "scenario.structure");
    n["structure"] = {{"explicit", normalize_explicit(s.at("explicit"), "scenario.structure.explicit")}};
  } else {
    fail("scenario.structure", "expected 'builder' or 'explicit'");
  }
  n["theta"] = normalize_theta(raw.contains("theta") ? raw.at("theta") : json(), "scenario.theta");
  json tasks = json::array();
  if (raw.contains("tasks")) {
    const json& t = raw.at("tasks");
    if (!t.is_array()) fail("scenario.tasks", "expected array");
    for (size_t k = 0; k < t.size(); ++k)
      tasks.push_back(normalize_task(t[k], "scenario.tasks[" + std::to_string(k) + "]"));
  }
  n["tasks"] = tasks;
  std::string out = ".";
  if (raw.contains("output")) {
    const json& o = raw.at("output");
    reject_unknown(o, {"dir"}, "scenario.output");
    if (o.contains("dir")) out = text(o.at("dir"), "scenario.output.dir");
  }
  n["output"] = {{"dir", out}};
  const json seed = raw.contains("seed") ? raw.at("seed") : json(1);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    fail("scenario.seed", "expected non-negative integer");
  n["seed"] = seed.get<std::uint64_t>();

  Scenario sc;
  sc.normalized = n;
  sc.seed = n["seed"].get<std::uint64_t>();
  sc.out_dir = out;
  return sc;
}

Scenario parse_scenario(const std::string& text) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("parse error at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                      e.what());
  }
  return normalize(raw);
}

DifferentialStructure make_structure(const json& n) {
  const json& s = n.at("structure");
  if (s.contains("builder")) {
    const std::string b = s.at("builder");
    const json& p = s.at("params");
    if (b == "depolarizing")
      return build_depolarizing(p.at("gamma"), p.at("n"), p.at("matrix_units"));
    if (b == "hypercube") return build_hypercube(p.at("n"));
    if (b == "fermion_ou") return build_fermion_ou(p.at("n"));
    if (b == "random_lindblad") return random_lindblad(p.at("n"), p.at("seed").get<std::uint64_t>());
    if (b == "markov_graph" || b == "markov_lindblad") {
      RMat q = real_matrix(p.at("q"), "scenario.structure.params.q");
      Vec pi = real_vector(p.at("pi"), "scenario.structure.params.pi");
      if (pi.size() != q.rows()) fail("scenario.structure.params.pi", "length does not match q");
      return b == "markov_graph" ? build_markov_graph(q, pi) : build_markov_lindblad(q, pi);
    }
    std::vector<Mat> V;
    for (const json& v : p.at("V")) V.push_back(parse_matrix(v, "V"));
    return build_lindblad(V, parse_matrix(p.at("sigma"), "sigma"));
  }
  const json& e = s.at("explicit");
  const json& a = e.at("algebra");
  const std::string kind = a.at("kind");
  Algebra alg = kind == "full"       ? Algebra::full(a.at("n"))
                : kind == "clifford" ? Algebra::clifford(a.at("n"))
                                     : Algebra::diagonal(real_vector(a.at("weights"), "weights"));
  const int N = alg.ambient_dim();
  std::vector<Direction> dirs;
  for (const json& d : e.at("directions")) {
    Mat V = parse_matrix(d.at("V"), "V");
    if (V.rows() != N) fail("scenario.structure.explicit.directions", "V has wrong size");
    auto hom = [&](const std::string& h) {
      return h == "parity" ? Homomorphism::parity(alg) : Homomorphism::identity(alg);
    };
    dirs.push_back({alg, hom(d.at("ell")), hom(d.at("r")), V, d.at("omega").get<double>(),
                    d.at("jstar").get<int>(), d.at("label").get<std::string>()});
  }
  for (const Direction& d : dirs)
    if (d.jstar < 0 || d.jstar >= static_cast<int>(dirs.size()))
      fail("scenario.structure.explicit.directions", "jstar out of range");
  Mat sigma = e.contains("sigma") ? parse_matrix(e.at("sigma"), "sigma") : Mat(Mat::Identity(N, N));
  return DifferentialStructure(alg, std::move(dirs), sigma, "explicit");
}

ThetaAssignment make_theta(const DifferentialStructure& ds, const json& n) {
  const json& t = n.at("theta");
  const std::string kind = t.at("kind");
  if (kind == "default") return ThetaAssignment::default_for(ds);
  if (kind == "logarithmic") return ThetaAssignment::uniform(ds, MeanFunction::logarithmic());
  if (kind == "tilted_log") return ThetaAssignment::uniform(ds, MeanFunction::tilted_log(t.at("beta")));
  return ThetaAssignment::uniform(ds, MeanFunction::power(t.at("m"), t.at("beta")));
}

void ensure_task(Scenario& sc, const std::string& cmd) {
  for (const json& t : sc.normalized["tasks"])
    if (t.at("cmd") == cmd) return;
  sc.normalized["tasks"].push_back(normalize_task({{"cmd", cmd}}, "task '" + cmd + "'"));
}

void apply_overrides(Scenario& sc, const std::vector<std::string>& overrides) {
  static const std::vector<std::string> int_keys = {
      "grid_n", "max_iter", "samples", "boundary_samples", "refine", "refine_evals",
      "ricci_samples", "mlsi_samples", "transport_samples", "steps"};
  static const std::vector<std::string> real_keys = {"primal_tol", "eps_boundary", "t_max", "T",
                                                     "abort_eig"};
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) fail("--tol-override", "expected KEY=VAL, got '" + o + "'");
    const std::string key = o.substr(0, eq), val = o.substr(eq + 1);
    const bool is_int = std::find(int_keys.begin(), int_keys.end(), key) != int_keys.end();
    const bool is_real = std::find(real_keys.begin(), real_keys.end(), key) != real_keys.end();
    if (!is_int && !is_real) fail("--tol-override", "unknown key '" + key + "'");
    std::istringstream is(val);
    json v;
    if (is_int) {
      long long x;
      if (!(is >> x) || !is.eof() || x < 1) fail("--tol-override", "bad integer for " + key);
      v = x;
    } else {
      double x;
      if (!(is >> x) || !is.eof() || !std::isfinite(x)) fail("--tol-override", "bad number for " + key);
      v = x;
    }
    for (json& t : sc.normalized["tasks"])
      if (t.contains(key)) t[key] = v;
  }
}

}  // namespace qmt::cli
