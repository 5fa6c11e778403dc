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

#include "qmt/commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#ifndef QMT_VERSION
#define QMT_VERSION "unknown"
#endif

namespace qmt::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read scenario '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Mat state_arg(const Algebra& alg, const json& j, const std::string& what) {
  Mat rho = parse_matrix(j, what);
  if (rho.rows() != alg.ambient_dim()) throw Error(what + " has wrong size");
  if (!alg.contains(rho)) throw Error(what + " not in algebra");
  if (std::abs(alg.trace(rho) - 1.0) > 1e-9) throw Error(what + " must have unit normalized trace");
  if (min_eigenvalue(hermitize(rho, what)) <= 0.0) throw Error(what + " not strictly positive");
  return rho;
}

TaskOutput cmd_validate(const DifferentialStructure& ds) {
  ValidationReport rep = validate_structure(ds);
  json checks = json::array();
  for (const AxiomCheck& c : rep.checks)
    checks.push_back({{"axiom", c.axiom}, {"direction", c.direction}, {"residual", c.residual},
                      {"passed", c.passed}, {"gating", c.gating}});
  json out = {{"structure_id", ds.id()}, {"valid", rep.valid}, {"checks", checks}};
  TaskOutput t{"validate.json", dump(out), rep.valid ? kOk : kValidation, ""};
  std::ostringstream table;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %4s %12s  %s\n", "axiom", "dir", "residual", "status");
  table << line;
  for (const AxiomCheck& c : rep.checks) {
    std::snprintf(line, sizeof line, "%-28s %4d %12.3e  %s%s\n", c.axiom.c_str(), c.direction,
                  c.residual, c.passed ? "pass" : "FAIL", c.gating ? "" : " (non-gating)");
    table << line;
  }
  t.message = table.str();
  return t;
}

DistanceOptions distance_options(const json& task, bool allow_nonconvex) {
  DistanceOptions o;
  o.grid_n = task.at("grid_n");
  o.max_iter = task.at("max_iter");
  o.primal_tol = task.at("primal_tol");
  o.eps_boundary = task.at("eps_boundary");
  o.richardson = task.at("richardson");
  o.allow_nonconvex = allow_nonconvex;
  return o;
}

TaskOutput cmd_distance(const DifferentialStructure& ds, const ThetaAssignment& theta,
                        const json& task, bool allow_nonconvex) {
  std::vector<Mat> pts;
  for (const json& e : task.at("endpoints"))
    pts.push_back(state_arg(ds.algebra(), e, "endpoint " + std::to_string(pts.size())));
  const int k = static_cast<int>(pts.size());
  const DistanceOptions opt = distance_options(task, allow_nonconvex);
  RMat D = RMat::Zero(k, k);
  Vec res = Vec::Zero(k);
  bool converged = true;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      DistanceResult r = distance(ds, theta, pts[a], pts[b], opt);
      D(a, b) = D(b, a) = opt.richardson ? r.extrapolated : r.value;
      res(a) = std::max(res(a), r.residual);
      res(b) = std::max(res(b), r.residual);
      converged = converged && r.converged;
    }
  }
  std::ostringstream os;
  os << "endpoint";
  for (int b = 0; b < k; ++b) os << ",d" << b;
  os << ",residual\n";
  for (int a = 0; a < k; ++a) {
    os << a;
    for (int b = 0; b < k; ++b) os << "," << format_real(D(a, b));
    os << "," << format_real(res(a)) << "\n";
  }
  return {"distance.csv", os.str(), converged ? kOk : kSolver,
          converged ? "" : "distance solver did not converge"};
}

json ricci_json(const DifferentialStructure& ds, const RicciEstimate& r) {
  json w = json::array();
  for (const RicciWitness& x : r.witnesses)
    w.push_back({{"quotient", x.quotient}, {"rho", matrix_json(x.rho)}, {"A", matrix_json(x.A)}});
  IntertwiningResult it = intertwining_lambda(ds);
  json inter = {{"applicable", it.applicable}, {"fitted", it.fitted}, {"residual", it.residual}};
  inter["lambda"] = it.lambda ? json(*it.lambda) : json();
  return {{"structure_id", ds.id()}, {"lambda_hat", r.lambda_hat}, {"method", r.method},
          {"label", r.label}, {"residual", r.residual}, {"scan_minimum", r.scan_minimum},
          {"stable", r.stable}, {"intertwining", inter}, {"witnesses", w}};
}

TaskOutput cmd_ricci(const DifferentialStructure& ds, const ThetaAssignment& theta,
                     const json& task, std::uint64_t seed) {
  RicciScanOptions o;
  o.samples = task.at("samples");
  o.boundary_samples = task.at("boundary_samples");
  o.refine = task.at("refine");
  o.refine_evals = task.at("refine_evals");
  o.seed = seed;
  return {"ricci.json", dump(ricci_json(ds, ricci_estimate(ds, theta, o))), kOk, ""};
}

json check_json(const SampledInequality& s) {
  json j = {{"constant", s.constant}, {"samples", s.samples}, {"holds", s.holds}};
  j["worst_residual"] = s.samples > 0 ? json(s.worst_residual) : json();
  j["worst_witness"] = s.samples > 0 ? matrix_json(s.worst_witness) : json();
  return j;
}

TaskOutput cmd_inequalities(const DifferentialStructure& ds, const json& task, std::uint64_t seed,
                            bool allow_nonconvex) {
  ReportOptions o;
  o.ricci.samples = task.at("ricci_samples");
  o.ricci.seed = seed;
  o.mlsi.samples = task.at("mlsi_samples");
  o.mlsi.boundary_samples = task.at("boundary_samples");
  o.mlsi.refine_evals = task.at("refine_evals");
  o.mlsi.seed = seed + 1;
  o.transport_samples = task.at("transport_samples");
  o.distance.grid_n = task.at("grid_n");
  o.distance.allow_nonconvex = allow_nonconvex;
  o.seed = seed + 2;
  InequalityReport r = inequality_report(ds, o);
  json mlsi = {{"lambda_hat", r.mlsi.lambda_hat}, {"sampled_min", r.mlsi.sampled_min},
               {"linearized", r.mlsi.linearized}, {"samples", r.mlsi.samples},
               {"trajectory_slopes", r.mlsi.slopes}};
  json out = {
      {"structure_id", r.structure_id},
      {"constants",
       {{"ric", r.ric.lambda_hat}, {"mlsi", r.mlsi.lambda_hat}, {"talagrand", r.talagrand.constant},
        {"t1", r.t1.constant}, {"poincare", r.poincare}}},
      {"methods",
       {{"ric", r.ric.method + " (" + r.ric.label + ")"}, {"mlsi", r.mlsi.method},
        {"talagrand", "sampled at the mlsi estimate"},
        {"t1", "sampled at mlsi / M^2"}, {"poincare", "generalized eigenproblem"}}},
      {"witnesses",
       {{"ric", r.ric.witnesses.empty() ? json() : matrix_json(r.ric.witnesses.front().rho)},
        {"mlsi", r.mlsi.witness.size() ? matrix_json(r.mlsi.witness) : json()}}},
      {"details",
       {{"mlsi", mlsi}, {"talagrand", check_json(r.talagrand)}, {"t1", check_json(r.t1)},
        {"comparison_M", r.comparison_M}}},
      {"chain",
       {{"ric_le_mlsi", r.ric_le_mlsi},
        {"talagrand_holds", r.talagrand.holds},
        {"t1_holds", r.t1.holds},
        {"mlsi_le_poincare", r.mlsi_le_poincare}}}};
  return {"inequalities.json", dump(out), kOk, ""};
}

TaskOutput cmd_evolve(const DifferentialStructure& ds, const json& task, std::uint64_t seed) {
  const Algebra& alg = ds.algebra();
  Mat rho0;
  if (task.contains("rho0")) {
    rho0 = state_arg(alg, task.at("rho0"), "rho0");
  } else {
    Rng rng(seed);
    rho0 = random_state(alg, rng);
  }
  const double t_max = task.at("t_max");
  const int steps = task.at("steps");
  std::ostringstream os;
  os << "t,ent,fisher,trace_residual\n";
  for (int i = 0; i <= steps; ++i) {
    const double t = t_max * i / steps;
    Mat rho = semigroup_dual_apply(ds, t, rho0);
    os << format_real(t) << "," << format_real(entropy(ds, rho)) << ","
       << format_real(fisher(ds, rho)) << "," << format_real(std::abs(alg.trace(rho) - 1.0))
       << "\n";
  }
  return {"evolve.csv", os.str(), kOk, ""};
}

TaskOutput cmd_geodesic(const DifferentialStructure& ds, const ThetaAssignment& theta,
                        const json& task) {
  GeodesicOptions o;
  o.T = task.at("T");
  o.steps = task.at("steps");
  o.abort_eig = task.at("abort_eig");
  GeodesicResult g = geodesic_shoot(ds, theta, state_arg(ds.algebra(), task.at("rho0"), "rho0"),
                                    parse_matrix(task.at("A0"), "A0"), o);
  const int n = ds.algebra().ambient_dim();
  std::ostringstream os;
  os << "t";
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) os << ",re" << i << "_" << k << ",im" << i << "_" << k;
  os << "\n";
  for (size_t s = 0; s < g.curve.t.size(); ++s) {
    os << format_real(g.curve.t[s]);
    const Mat& r = g.curve.rho[s];
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        os << "," << format_real(r(i, k).real()) << "," << format_real(r(i, k).imag());
    os << "\n";
  }
  return {"geodesic.csv", os.str(), g.aborted ? kSolver : kOk,
          g.aborted ? "geodesic left the interior of the state space" : ""};
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TaskOutput run_task(const DifferentialStructure& ds, const ThetaAssignment& theta,
                    const json& task, std::uint64_t seed, bool allow_nonconvex) {
  const std::string cmd = task.at("cmd");
  try {
    if (cmd == "validate") return cmd_validate(ds);
    if (cmd == "distance") return cmd_distance(ds, theta, task, allow_nonconvex);
    if (cmd == "ricci") return cmd_ricci(ds, theta, task, seed);
    if (cmd == "inequalities") return cmd_inequalities(ds, task, seed, allow_nonconvex);
    if (cmd == "evolve") return cmd_evolve(ds, task, seed);
    if (cmd == "geodesic") return cmd_geodesic(ds, theta, task);
  } catch (const Error& e) {
    return {"", "", kSchema, cmd + ": " + e.what()};
  }
  return {"", "", kSchema, "unknown command '" + cmd + "'"};
}

int run(const RunOptions& opt) {
  Scenario sc;
  std::optional<DifferentialStructure> ds;
  try {
    sc = parse_scenario(read_file(opt.scenario_path));
    if (opt.seed) {
      sc.seed = *opt.seed;
      sc.normalized["seed"] = *opt.seed;
    }
    if (opt.out_dir) {
      sc.out_dir = *opt.out_dir;
      sc.normalized["output"]["dir"] = *opt.out_dir;
    }
    if (!opt.dump_normalized) ensure_task(sc, opt.command);
    apply_overrides(sc, opt.overrides);
    if (opt.dump_normalized) {
      std::cout << dump(sc.normalized);
      return kOk;
    }
    ds = make_structure(sc.normalized);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const Error& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.rfind("structure failed validation", 0) == 0 ? kValidation : kSchema;
  }

  if (!validate_structure(*ds).valid) {
    TaskOutput v = cmd_validate(*ds);
    std::cout << v.message;
    std::cerr << "error: structure failed validation\n";
    return kValidation;
  }

  ThetaAssignment theta;
  try {
    theta = make_theta(*ds, sc.normalized);
  } catch (const Error& e) {
    std::cerr << "schema error: theta: " << e.what() << "\n";
    return kSchema;
  }

  std::vector<json> tasks;
  for (const json& t : sc.normalized["tasks"])
    if (t.at("cmd") == opt.command) tasks.push_back(t);

  std::vector<TaskOutput> outputs(tasks.size());
  std::vector<double> seconds(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t k = next++; k < tasks.size(); k = next++) {
      auto t0 = std::chrono::steady_clock::now();
      outputs[k] = run_task(*ds, theta, tasks[k], sc.seed, opt.allow_nonconvex);
      seconds[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int workers = std::max(1, std::min<int>(opt.threads, static_cast<int>(tasks.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  int code = kOk;
  json runtimes = json::array();
  try {
    fs::create_directories(sc.out_dir);
    for (size_t k = 0; k < outputs.size(); ++k) {
      TaskOutput& o = outputs[k];
      if (!o.message.empty()) (o.exit_code == kOk ? std::cout : std::cerr) << o.message;
      if (o.exit_code != kOk && !o.message.empty() && o.message.back() != '\n') std::cerr << "\n";
      if (o.exit_code != kOk && code == kOk) code = o.exit_code;
      if (o.file.empty()) continue;
      std::string name = o.file;
      if (k > 0) {
        const auto dot = name.rfind('.');
        name = name.substr(0, dot) + "_" + std::to_string(k) + name.substr(dot);
      }
      write_file(fs::path(sc.out_dir) / name, o.content);
      runtimes.push_back({{"file", name}, {"seconds", seconds[k]}});
    }
    json meta = {{"version", QMT_VERSION},      {"command", opt.command},
                 {"seed", sc.seed},             {"threads", opt.threads},
                 {"structure_id", ds->id()},    {"tasks", tasks},
                 {"runtimes", runtimes}};
    write_file(fs::path(sc.out_dir) / "metadata.json", dump(meta));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  }
  return code;
}

}  // namespace qmt::cli
