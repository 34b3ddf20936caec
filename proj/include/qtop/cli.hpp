#pragma once

#include "qtop/theta.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qtop {

struct Table1Row {
  std::array<long, 6> w;
  int pos, neg;            // stated signature of W
  std::string definiteness;  // "positive", "negative" or "indefinite"
};
const std::vector<Table1Row>& table1_rows();

struct DatasetGraph {
  std::string name;
  PlumbGraph graph;
  nlohmann::json expected;
  std::optional<ConeBasis> basis;  // pinned cone basis, if any
};

struct Dataset {
  std::string name;
  std::vector<DatasetGraph> graphs;
  nlohmann::json notes;
};

std::vector<std::string> dataset_names();
Dataset dataset(const std::string& name);

HGraph poincare_hgraph();
PlumbGraph poincare_y_graph();
PlumbGraph poincare_five_vertex_graph();

struct ResolvedGraph {
  std::string label;
  PlumbGraph graph;
  std::optional<ConeBasis> basis;
};
// "poincare", "poincare/<name>", "table1/<i>" (1-based), a JSON file path, or inline JSON
ResolvedGraph resolve_graph(const std::string& source);

struct RunConfig {
  std::string command;
  std::string graph = "poincare";
  std::vector<long> ks;
  std::optional<Rat> emax;
  std::vector<double> schedule;  // empty: scaled default
  int order = 3;
  unsigned precision = 128;
  uint64_t seed = 42;
  std::string out;
  std::string orientation = "auto";
  long bruteCap = 7;
  size_t bruteMaxVertices = 8;

  nlohmann::json to_json() const;
};

struct CommandResult {
  int exitCode = 0;  // 0 ok, 1 verification failure, 2 input error
  nlohmann::json report;
};

CommandResult cmd_analyze(const RunConfig& cfg);
CommandResult cmd_wrt(const RunConfig& cfg);
CommandResult cmd_zhat(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
// dispatches on cfg.command and maps InputError to exit code 2
CommandResult run_command(const RunConfig& cfg);

void write_atomic(const std::string& path, const std::string& content);

nlohmann::json analyze_graph(const PlumbGraph& g);
nlohmann::json cyc_to_json(const CycNum& z, unsigned bits = 64);

}  // namespace qtop
