#include "qtop/cli.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace qtop;

namespace {

RunConfig config(const std::string& cmd, const std::string& graph, std::vector<long> ks = {}) {
  RunConfig c;
  c.command = cmd;
  c.graph = graph;
  c.ks = std::move(ks);
  return c;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("datasets") {
    Dataset t = dataset("table1");
    CHECK(t.graphs.size() == 16);
    Dataset p = dataset("poincare");
    REQUIRE(p.graphs.size() == 3);
    CHECK(p.notes["prefactorPhase"] == "zeta_{24k}^{-35}");
    CHECK(p.graphs[2].basis.has_value());
    CHECK_THROWS_AS(dataset("nope"), InputError);
    // Fig 4 -> Fig 5 by two leaf blowups
    PlumbGraph once = neumann_move(poincare_y_graph(), MoveKind::b, MoveDir::blowup, {1, -1, -1});
    CHECK(once == poincare_five_vertex_graph());
  }

  TEST_CASE("graph sources") {
    CHECK(resolve_graph("poincare").graph == poincare_hgraph().graph());
    CHECK(resolve_graph("poincare/y").graph.size() == 4);
    CHECK(resolve_graph("table1/5").graph == HGraph{{1, 0, -2, -5, -3, -4}}.graph());
    CHECK(resolve_graph("[1,3,2,3,-1,-1]").graph == poincare_hgraph().graph());
    CHECK(resolve_graph(R"({"weights":[5]})").graph.size() == 1);
    CHECK_THROWS_AS(resolve_graph("table1/17"), InputError);
    CHECK_THROWS_AS(resolve_graph("/nonexistent/graph.json"), InputError);
    CHECK_THROWS_AS(resolve_graph(R"({"weights":[1,2,3],"edges":[[1,2],[2,3],[3,1]]})"), InputError);
  }

  TEST_CASE("analyze") {
    auto r = run_command(config("analyze", "poincare"));
    CHECK(r.exitCode == 0);
    CHECK(r.report["S"] == nlohmann::json({{30, -6}, {-6, 1}}));
    CHECK(r.report["M"] == 6);
    CHECK(r.report["c"] == -1);
    CHECK(r.report["prefactorExponent"] == "-35/24");
    CHECK(r.report["chi"]["5/12"] == -1);
    CHECK(r.report["psi"]["1/2"] == -2);
    CHECK(r.report["seifertReducible"] == true);
    auto t = run_command(config("analyze", "table1/15"));
    CHECK(t.report["signature"] == nlohmann::json({3, 3}));
    CHECK(t.report["sDefiniteness"] == "indefinite");
    auto d = run_command(config("analyze", "table1/10"));
    CHECK(d.exitCode == 0);
    CHECK(d.report["detW"] == "27");
    CHECK(d.report["sData"].is_null());
    auto bad = run_command(config("analyze", R"({"weights":[1,2,3],"edges":[[1,2],[2,3],[3,1]]})"));
    CHECK(bad.exitCode == 2);
    CHECK(bad.report.contains("error"));
  }

  TEST_CASE("wrt") {
    auto r = run_command(config("wrt", "poincare", {3}));
    CHECK(r.exitCode == 0);
    CHECK(r.report["runs"][0]["verdict"] == "exact-equal");
    auto y = run_command(config("wrt", "poincare/y", {3}));
    CHECK(y.report["runs"][0]["verdict"] == "brute-only");
    CHECK(y.report["runs"][0]["bruteforce"]["coeffs"] == r.report["runs"][0]["bruteforce"]["coeffs"]);
    auto k1 = run_command(config("wrt", "poincare", {1}));
    CHECK(k1.exitCode == 2);
    CHECK(k1.report["error"]["message"] == "level must be ≥ 2");
    RunConfig lowp = config("wrt", "poincare", {2});
    lowp.precision = 64;
    CHECK(run_command(lowp).exitCode == 2);
  }

  TEST_CASE("zhat") {
    RunConfig c = config("zhat", "poincare", {2});
    c.emax = Rat(10);
    auto r = run_command(c);
    CHECK(r.exitCode == 0);
    CHECK(r.report["basis"]["source"] == "pinned");
    CHECK(!r.report["series"]["terms"].empty());
    auto d = run_command(config("zhat", "table1/1"));
    CHECK(d.exitCode == 2);
    CHECK(d.report["error"]["message"] == "S not indefinite");
    RunConfig ic = config("zhat", "table1/9");
    ic.emax = Rat(30);
    auto i = run_command(ic);
    CHECK(i.exitCode == 0);
    CHECK(!i.report["series"]["terms"].empty());
  }

  TEST_CASE("verify reports failures with exit code 1") {
    // no H-graph: only the property suites run; the second base change equality fails on random data
    auto r = run_command(config("verify", "poincare/y"));
    CHECK(r.report["config"]["seed"] == 42);
    bool vanishing = false, reciprocity = false;
    for (const auto& c : r.report["checks"]) {
      if (c["name"] == "vanishing_suite") vanishing = c["pass"];
      if (c["name"] == "reciprocity_suite") reciprocity = c["pass"];
    }
    CHECK(vanishing);
    CHECK(reciprocity);
    CHECK(r.exitCode == (r.report["pass"] ? 0 : 1));
  }

  TEST_CASE("atomic output") {
    auto dir = std::filesystem::temp_directory_path() / "qtop_cli_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "out.json").string();
    write_atomic(path, "{}\n");
    write_atomic(path, "{\"a\": 1}\n");
    std::ifstream in(path);
    std::string s((std::istreambuf_iterator<char>(in)), {});
    CHECK(s == "{\"a\": 1}\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(write_atomic("/nonexistent/dir/out.json", "x"), InputError);
  }
}
