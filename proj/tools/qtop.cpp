#include "qtop/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace qtop;

namespace {

std::vector<double> parse_schedule(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("schedule entries must be numbers: '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum invariants of plumbed 3-manifolds with H-shaped graphs"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string emax, schedule;
  bool pretty = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph, "dataset name (poincare, poincare/y, table1/5), JSON file or inline JSON");
    sub->add_option("--k", cfg.ks, "level(s)");
    sub->add_option("--emax", emax, "exponent cut, rational");
    sub->add_option("--schedule", schedule, "comma separated radial parameters t, decreasing");
    sub->add_option("--order", cfg.order, "extrapolation order");
    sub->add_option("--precision", cfg.precision, "bits for numeric output (>= 128)");
    sub->add_option("--seed", cfg.seed, "seed for the randomized suites");
    sub->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
    sub->add_option("--orientation", cfg.orientation, "auto, thm11 or thm72");
    sub->add_option("--brute-cap", cfg.bruteCap, "largest k for the brute force sum");
    sub->add_flag("--pretty", pretty, "indent the JSON output");
  };
  for (const char* name : {"analyze", "wrt", "zhat", "verify"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub);
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CommandResult res;
  try {
    if (!emax.empty()) cfg.emax = parse_rat(emax);
    if (!schedule.empty()) cfg.schedule = parse_schedule(schedule);
    res = run_command(cfg);
  } catch (const std::exception& e) {
    res = {2, {{"error", {{"kind", "input"}, {"message", e.what()}}}}};
  }

  std::string text = res.report.dump(pretty ? 2 : -1) + "\n";
  if (res.report.contains("error")) std::cerr << "error: " << res.report["error"]["message"].get<std::string>() << "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    try {
      write_atomic(cfg.out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return res.exitCode;
}
