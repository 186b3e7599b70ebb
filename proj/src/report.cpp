#include "tele/report.hpp"

#include <algorithm>

#include "tele/errors.hpp"

namespace tele::report {

namespace {

// Display width in code points.
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string statement_subject(const IndependenceStatement& s) {
  std::string out = s.x + " and " + s.y;
  if (!s.given.empty()) {
    out += " given ";
    for (std::size_t i = 0; i < s.given.size(); ++i) out += (i ? ", " : "") + s.given[i];
  }
  return out;
}

Json statement_to_json(const IndependenceStatement& s) {
  return Json{{"x", s.x}, {"y", s.y}, {"given", s.given}};
}

}  // namespace

std::string format_table(const WorldTable& table) {
  const auto& cols = table.columns();
  std::vector<std::vector<std::string>> cells;
  cells.push_back(cols);
  for (const auto& w : table.rows()) {
    std::vector<std::string> line;
    for (Level l : w) line.push_back(std::to_string(l));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> widths(cols.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], width(line[i]));

  std::string out;
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      text += line[i];
      if (i + 1 < line.size()) text += std::string(widths[i] - width(line[i]) + 2, ' ');
    }
    out += text + "\n";
  }
  return out;
}

std::string format_world(const World& world) {
  std::string out = "(";
  for (std::size_t i = 0; i < world.size(); ++i) out += (i ? "," : "") + std::to_string(world[i]);
  return out + ")";
}

Json table_to_json(const WorldTable& table) {
  Json worlds = Json::array();
  for (const auto& w : table.rows()) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < w.size(); ++i) obj[table.columns()[i]] = w[i];
    worlds.push_back(std::move(obj));
  }
  return Json{{"columns", table.columns()}, {"worlds", std::move(worlds)}};
}

WorldTable table_from_json(const Json& json) {
  try {
    auto columns = json.at("columns").get<std::vector<std::string>>();
    std::vector<World> rows;
    for (const auto& obj : json.at("worlds")) {
      if (obj.size() != columns.size()) throw Error("world object with the wrong number of fields");
      World w;
      for (const auto& c : columns) w.push_back(obj.at(c).get<Level>());
      rows.push_back(std::move(w));
    }
    return WorldTable(std::move(columns), std::move(rows));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed world table: ") + e.what());
  }
}

std::string format_expectation(const DependenceVerdict& v) {
  std::string verdict = !v.independent ? "undefined (goal unreachable)"
                        : *v.independent ? "independent (expected)"
                                         : "dependent (expected)";
  return statement_subject(v.statement) + ": " + verdict;
}

std::string format_graph_verdict(const DependenceVerdict& v) {
  return statement_subject(v.statement) + ": " + (v.graph_separated ? "separated" : "connected");
}

std::string format_edge(const CausalDag::Edge& edge) { return edge.first + " -> " + edge.second; }

Json verdict_to_json(const DependenceVerdict& v) {
  Json out = statement_to_json(v.statement);
  out["graph"] = v.graph_separated ? "separated" : "connected";
  out["expected"] = !v.independent ? Json(nullptr) : Json(*v.independent ? "independent" : "dependent");
  return out;
}

Json structure_to_json(const StructureReport& r) {
  auto edges = [](const std::vector<CausalDag::Edge>& es) {
    Json out = Json::array();
    for (const auto& e : es) out.push_back(Json::array({e.first, e.second}));
    return out;
  };
  Json disagreements = Json::array();
  for (const auto& d : r.disagreements) {
    Json item = statement_to_json(d.statement);
    item["final"] = d.separated_in_final ? "separated" : "connected";
    item["reduction"] = d.separated_in_reduction ? "separated" : "connected";
    disagreements.push_back(std::move(item));
  }
  return Json{{"edges_only_in_final", edges(r.edges_only_in_final)},
              {"edges_only_in_reduction", edges(r.edges_only_in_reduction)},
              {"action_parents_final", r.action_parents_final},
              {"action_parents_reduction", r.action_parents_reduction},
              {"effective_parents_final", r.effective_parents_final},
              {"effective_parents_reduction", r.effective_parents_reduction},
              {"wiring_differs", r.wiring_differs},
              {"disagreements", std::move(disagreements)},
              {"projection", std::string(to_string(r.projection))},
              {"achievability", std::string(to_string(r.achievability))}};
}

}  // namespace tele::report
