#include "qtop/cli.hpp"

#include <fstream>
#include <sstream>

namespace qtop {

using nlohmann::json;

const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows = {
      {{-1, -3, -3, -4, -3, -4}, 0, 6, "positive"},   {{-1, -4, -2, -5, -2, -7}, 0, 6, "positive"},
      {{-1, -2, -3, 5, -2, -3}, 1, 5, "positive"},    {{-1, -3, -2, -7, -2, 3}, 1, 5, "positive"},
      {{1, 0, -2, -5, -3, -4}, 1, 5, "indefinite"},   {{-1, -4, -2, -5, -2, -5}, 1, 5, "indefinite"},
      {{0, -1, -4, -5, -1, -4}, 2, 4, "positive"},    {{0, 0, -1, -2, -2, -5}, 2, 4, "positive"},
      {{-1, -2, -2, 5, -3, -4}, 2, 4, "indefinite"},  {{-2, -1, -2, 7, -4, -5}, 2, 4, "indefinite"},
      {{-1, -1, 2, -3, -3, 5}, 2, 4, "negative"},     {{-1, -1, 2, 3, -4, -5}, 2, 4, "negative"},
      {{0, -1, 2, 3, 3, -8}, 3, 3, "positive"},       {{0, -1, 1, -3, 3, 5}, 3, 3, "positive"},
      {{1, 1, -2, 3, -3, 2}, 3, 3, "indefinite"},     {{1, 1, -2, -7, 4, 7}, 3, 3, "indefinite"},
  };
  return rows;
}

HGraph poincare_hgraph() { return HGraph{{1, 3, 2, 3, -1, -1}}; }

PlumbGraph poincare_y_graph() { return make_graph({1, 5, 2, 3}, {{1, 2}, {1, 3}, {1, 4}}); }

PlumbGraph poincare_five_vertex_graph() {
  return make_graph({1, 4, 2, 3, -1}, {{1, 2}, {1, 3}, {1, 4}, {2, 5}});
}

std::vector<std::string> dataset_names() { return {"poincare", "table1"}; }

namespace {

std::string weights_label(const std::array<long, 6>& w) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < 6; ++i) os << (i ? "," : "") << w[i];
  os << ")";
  return os.str();
}

}  // namespace

Dataset dataset(const std::string& name) {
  Dataset d;
  d.name = name;
  if (name == "table1") {
    int i = 0;
    for (const auto& r : table1_rows()) {
      ++i;
      d.graphs.push_back({"row" + std::to_string(i) + " " + weights_label(r.w), HGraph{r.w}.graph(),
                          {{"signature", {r.pos, r.neg}}, {"sDefiniteness", r.definiteness}},
                          std::nullopt});
    }
    d.notes = {{"caption", "stated signature of W and definiteness of S, det W = +-1"}};
    return d;
  }
  if (name == "poincare") {
    d.graphs.push_back({"y", poincare_y_graph(), {{"detW", -1}}, std::nullopt});
    d.graphs.push_back({"five", poincare_five_vertex_graph(), {{"detW", -1}}, std::nullopt});
    d.graphs.push_back({"h",
                        poincare_hgraph().graph(),
                        {{"detW", -1},
                         {"S", {{30, -6}, {-6, 1}}},
                         {"M", 6},
                         {"N", 1},
                         {"a", -5},
                         {"c", -1},
                         {"sigmaW", 0},
                         {"sigmaS", 0},
                         {"sigmaWprime", 0},
                         {"prefactorExponent", "-35/24"}},
                        poincare_cone_basis()});
    // q^(-35/24) at q -> zeta_k is zeta_24k^(-35); the positive exponent of the printed display does not
    // match wrt_bruteforce
    d.notes = {{"prefactorPhase", "zeta_{24k}^{-35}"}, {"zhatSign", -1}};
    return d;
  }
  throw InputError("unknown dataset '" + name + "'");
}

ResolvedGraph resolve_graph(const std::string& source) {
  if (source.empty()) throw InputError("empty graph source");
  std::string s = source;
  if (s == "poincare") s = "poincare/h";
  auto slash = s.find('/');
  if (slash != std::string::npos && (s.rfind("poincare/", 0) == 0 || s.rfind("table1/", 0) == 0)) {
    std::string ds = s.substr(0, slash), item = s.substr(slash + 1);
    Dataset d = dataset(ds);
    if (ds == "table1") {
      size_t idx = 0;
      try {
        idx = std::stoul(item);
      } catch (const std::exception&) {
        throw InputError("table1 entries are addressed as table1/<row>, 1-based");
      }
      if (idx < 1 || idx > d.graphs.size()) throw InputError("table1 has rows 1.." + std::to_string(d.graphs.size()));
      return {"table1/" + item, d.graphs[idx - 1].graph, std::nullopt};
    }
    for (const auto& g : d.graphs)
      if (g.name == item) return {"poincare/" + item, g.graph, g.basis};
    throw InputError("poincare dataset has graphs y, five, h");
  }
  json j;
  auto first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && (s[first] == '{' || s[first] == '[')) {
    try {
      j = json::parse(s);
    } catch (const json::exception& e) {
      throw InputError(std::string("graph JSON does not parse: ") + e.what());
    }
  } else {
    std::ifstream in(s);
    if (!in) throw InputError("no dataset or readable file named '" + s + "'");
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError(std::string("graph file does not parse: ") + e.what());
    }
  }
  ResolvedGraph r;
  r.label = s;
  // a bare array is the weight list of an H-graph
  if (j.is_array()) {
    if (j.size() != 6) throw InputError("a bare weight array must have 6 entries (H-graph)");
    HGraph h;
    for (int i = 0; i < 6; ++i) {
      if (!j[i].is_number_integer()) throw InputError("weights must be integers");
      h.w[i] = j[i].get<long>();
    }
    r.graph = h.graph();
    return r;
  }
  r.graph = parse_graph(j);
  if (j.contains("basis")) r.basis = ConeBasis::from_json(j.at("basis"));
  return r;
}

}  // namespace qtop
