#include "qtop/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qtop {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json matrix_json(const IntMatrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.get_si());
    out.push_back(r);
  }
  return out;
}

void check_config(const RunConfig& cfg) {
  if (cfg.precision < 128) throw InputError("precision must be >= 128 bits");
  for (long k : cfg.ks)
    if (k < 2) throw InputError("level must be ≥ 2");
  if (cfg.orientation != "auto" && cfg.orientation != "thm11" && cfg.orientation != "thm72")
    throw InputError("orientation must be auto, thm11 or thm72");
  if (cfg.order < 0) throw InputError("extrapolation order must be >= 0");
}

std::vector<long> levels(const RunConfig& cfg, std::vector<long> fallback) {
  return cfg.ks.empty() ? fallback : cfg.ks;
}

HGraph require_hgraph(const PlumbGraph& g) {
  auto h = as_hgraph(g);
  if (!h) throw InputError("graph is not an H-graph");
  return *h;
}

struct IndefiniteSetup {
  HGraph h;
  Mat2 S;
  ConeBasis basis;
  std::vector<double> schedule;
};

IndefiniteSetup indefinite_setup(const ResolvedGraph& rg, const RunConfig& cfg) {
  IndefiniteSetup st;
  st.h = require_hgraph(rg.graph);
  QuadFormData sd = s_data(st.h);
  if (!sd.s_indefinite()) throw InputError("S not indefinite");
  st.S = to_mat2(sd.S);
  st.basis = rg.basis ? *rg.basis : cone_basis(st.S);
  try {
    validate_cone_basis(st.S, st.basis);
  } catch (const ConsistencyError& e) {
    throw InputError(e.what());
  }
  st.schedule = cfg.schedule.empty() ? default_schedule(st.S, st.basis) : cfg.schedule;
  return st;
}

json error_report(const std::string& kind, const std::string& msg, const RunConfig& cfg) {
  return {{"config", cfg.to_json()}, {"error", {{"kind", kind}, {"message", msg}}}};
}

}  // namespace

json cyc_to_json(const CycNum& z, unsigned bits) {
  json c = json::array();
  for (const auto& x : z.coeffs()) c.push_back(to_string(x));
  ComplexHP e = z.embed(bits);
  return {{"level", z.level()}, {"coeffs", c}, {"numeric", {e.real_d(), e.imag_d()}}};
}

json RunConfig::to_json() const {
  json j = {{"command", command}, {"graph", graph},   {"k", ks},           {"order", order},
            {"precision", precision}, {"seed", seed}, {"orientation", orientation},
            {"bruteCap", bruteCap}, {"bruteMaxVertices", bruteMaxVertices}};
  j["emax"] = emax ? json(to_string(*emax)) : json(nullptr);
  j["schedule"] = schedule.empty() ? json("scaled default") : json(schedule);
  if (!out.empty()) j["out"] = out;
  return j;
}

json analyze_graph(const PlumbGraph& g) {
  validate_tree(g);
  IntMatrix W = linking_matrix(g);
  MatrixInvariants inv = matrix_invariants(W);
  json r = {{"graph", graph_to_json(g)},
            {"W", matrix_json(W)},
            {"detW", inv.det.get_str()},
            {"signature", {inv.pos, inv.neg}},
            {"sigmaW", inv.sigma()}};
  auto h = as_hgraph(g);
  r["hgraph"] = h ? json(h->w) : json(nullptr);
  if (!h) return r;
  r["seifertReducible"] = is_seifert_reducible(*h);
  if (inv.det != 1 && inv.det != -1) {
    r["sData"] = nullptr;
    r["sDataReason"] = "det W must be +1 or -1";
    return r;
  }
  QuadFormData sd = s_data(*h);
  json S = {{sd.S[0][0].get_si(), sd.S[0][1].get_si()}, {sd.S[1][0].get_si(), sd.S[1][1].get_si()}};
  r["S"] = S;
  r["M"] = sd.M.get_si();
  r["N"] = sd.N.get_si();
  r["a"] = sd.a.get_si();
  r["c"] = sd.c.get_si();
  r["detS"] = sd.detS.get_si();
  r["sigmaS"] = sd.sigmaS;
  r["sigmaWprime"] = sd.sigmaWprime;
  r["prefactorExponent"] = to_string(sd.prefactorExponent);
  r["sDefiniteness"] = sd.invS.pos == 2 ? "positive" : sd.invS.neg == 2 ? "negative" : "indefinite";
  WeightedCharSet cs = char_sets(*h);
  json T = json::object(), U = json::object();
  for (const auto& [a, chi] : cs.T) T[to_string(a)] = chi;
  for (const auto& [b, psi] : cs.U) U[to_string(b)] = psi;
  r["chi"] = T;
  r["psi"] = U;
  return r;
}

CommandResult cmd_analyze(const RunConfig& cfg) {
  check_config(cfg);
  ResolvedGraph rg = resolve_graph(cfg.graph);
  json r = analyze_graph(rg.graph);
  r["config"] = cfg.to_json();
  r["label"] = rg.label;
  if (rg.basis) r["pinnedBasis"] = rg.basis->to_json();
  return {0, r};
}

CommandResult cmd_wrt(const RunConfig& cfg) {
  check_config(cfg);
  ResolvedGraph rg = resolve_graph(cfg.graph);
  validate_tree(rg.graph);
  auto h = as_hgraph(rg.graph);
  json runs = json::array();
  int exitCode = 0;
  for (long k : levels(cfg, {2})) {
    json run = {{"k", k}};
    std::optional<CycNum> fast, brute;
    if (h) {
      auto t0 = std::chrono::steady_clock::now();
      try {
        fast = wrt_fast(*h, k).value;
        run["fast"] = cyc_to_json(*fast, cfg.precision);
        run["fastSeconds"] = seconds_since(t0);
      } catch (const InputError& e) {
        run["fastSkipped"] = e.what();
      }
    } else {
      run["fastSkipped"] = "not an H-graph";
    }
    if (rg.graph.size() <= cfg.bruteMaxVertices && k <= cfg.bruteCap) {
      auto t0 = std::chrono::steady_clock::now();
      brute = wrt_bruteforce(rg.graph, k).value;
      run["bruteforce"] = cyc_to_json(*brute, cfg.precision);
      run["bruteSeconds"] = seconds_since(t0);
    } else {
      run["bruteSkipped"] = "outside the brute force cap";
    }
    std::string verdict;
    if (fast && brute) verdict = *fast == *brute ? "exact-equal" : "mismatch";
    else if (fast) verdict = "fast-only";
    else if (brute) verdict = "brute-only";
    else verdict = "none";
    if (verdict == "mismatch") exitCode = 1;
    run["verdict"] = verdict;
    runs.push_back(run);
  }
  return {exitCode, {{"config", cfg.to_json()}, {"label", rg.label}, {"runs", runs}}};
}

CommandResult cmd_zhat(const RunConfig& cfg) {
  check_config(cfg);
  ResolvedGraph rg = resolve_graph(cfg.graph);
  IndefiniteSetup st = indefinite_setup(rg, cfg);
  long k = levels(cfg, {2}).front();
  Rat x = make_rat(1, k);
  Rat emax = cfg.emax ? *cfg.emax : Rat(10);
  auto t0 = std::chrono::steady_clock::now();
  QSeries qs = zhat_series(st.h, st.basis, x, emax);
  json series = qs.to_json(std::numeric_limits<size_t>::max(), cfg.precision);
  series["prefactor"] = cyc_to_json(qs.prefactor, cfg.precision);
  return {0,
          {{"config", cfg.to_json()},
           {"label", rg.label},
           {"x", to_string(x)},
           {"basis", st.basis.to_json()},
           {"seconds", seconds_since(t0)},
           {"series", series}}};
}

CommandResult cmd_verify(const RunConfig& cfg) {
  check_config(cfg);
  ResolvedGraph rg = resolve_graph(cfg.graph);
  std::vector<long> ks = levels(cfg, {2, 3});
  json checks = json::array();
  bool allPass = true;
  auto record = [&](const std::string& name, bool pass, double secs, json details) {
    allPass = allPass && pass;
    checks.push_back({{"name", name}, {"pass", pass}, {"seconds", secs}, {"details", std::move(details)}});
  };

  auto h = as_hgraph(rg.graph);
  std::optional<std::string> orientation;
  bool orientationConsistent = true;
  if (h) {
    MatrixInvariants inv = matrix_invariants(linking_matrix(rg.graph));
    bool unimodular = inv.det == 1 || inv.det == -1;
    for (long k : ks) {
      if (!unimodular || k > cfg.bruteCap) break;
      auto t0 = std::chrono::steady_clock::now();
      CycNum fast = wrt_fast(*h, k).value, brute = wrt_bruteforce(rg.graph, k).value;
      record("wrt_oracle k=" + std::to_string(k), fast == brute, seconds_since(t0),
             {{"fast", cyc_to_json(fast, cfg.precision)}, {"bruteforce", cyc_to_json(brute, cfg.precision)}});
    }
    if (unimodular && s_data(*h).s_indefinite()) {
      IndefiniteSetup st = indefinite_setup(rg, cfg);
      for (long k : ks) {
        MainTheoremReport rep = verify_main_theorem(st.h, st.basis, k, st.schedule, cfg.order);
        bool pass = rep.pass();
        if (cfg.orientation == "thm11") pass = rep.relErr1 <= 1e-3;
        if (cfg.orientation == "thm72") pass = rep.relErr2 <= 1e-3;
        std::string v = rep.verdict ? to_string(*rep.verdict) : "none";
        if (!orientation) orientation = v;
        else if (*orientation != v) orientationConsistent = false;
        record("main_theorem k=" + std::to_string(k), pass, rep.seconds, rep.to_json());
      }
      for (long k : ks) {
        auto t0 = std::chrono::steady_clock::now();
        ZwegersReport rep = verify_zwegers_vanishing(st.h, st.basis, k, st.schedule, cfg.order);
        record("zwegers_vanishing k=" + std::to_string(k), rep.pass(), seconds_since(t0), rep.to_json());
      }
    }
  }
  if (orientation && cfg.orientation == "auto")
    record("orientation_consistency", orientationConsistent && *orientation != "none", 0,
           {{"verdict", *orientation}});

  auto suite = [&](const std::string& name, auto fn, int count) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteReport r = fn(cfg.seed, count);
    json fails = json::array();
    for (size_t i = 0; i < r.failures.size() && i < 10; ++i) fails.push_back(r.failures[i]);
    record(name, r.ok(), seconds_since(t0),
           {{"seed", cfg.seed},
            {"instances", r.instances},
            {"passed", r.passed},
            {"skipped", r.skipped},
            {"failureCount", r.failures.size()},
            {"failures", fails},
            {"notes", r.notes}});
  };
  suite("vanishing_suite", vanishing_suite, 100);
  suite("base_change_suite", base_change_suite, 100);
  suite("reciprocity_suite", reciprocity_suite, 50);

  json rep = {{"config", cfg.to_json()}, {"label", rg.label}, {"checks", checks}, {"pass", allPass}};
  rep["orientation"] = orientation ? json(*orientation) : json(nullptr);
  return {allPass ? 0 : 1, rep};
}

CommandResult run_command(const RunConfig& cfg) {
  try {
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "wrt") return cmd_wrt(cfg);
    if (cfg.command == "zhat") return cmd_zhat(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    throw InputError("unknown command '" + cfg.command + "'");
  } catch (const InputError& e) {
    return {2, error_report("input", e.what(), cfg)};
  } catch (const json::exception& e) {
    return {2, error_report("input", e.what(), cfg)};
  } catch (const DivergenceError& e) {
    return {2, error_report("divergence", e.what(), cfg)};
  } catch (const ConsistencyError& e) {
    return {1, error_report("consistency", e.what(), cfg)};
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move output into place: " + ec.message());
  }
}

}  // namespace qtop
