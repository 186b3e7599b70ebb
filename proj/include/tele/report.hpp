#ifndef TELE_REPORT_HPP_
#define TELE_REPORT_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "tele/identification.hpp"
#include "tele/model.hpp"
#include "tele/reduction.hpp"
#include "tele/teleology.hpp"

namespace tele::report {

using Json = nlohmann::ordered_json;

/// Header row plus one row per world, columns left-aligned and separated by
/// two spaces, no trailing blanks.
std::string format_table(const WorldTable& table);

/// "(0,1,1,1)"
std::string format_world(const World& world);

/// {"columns": [...], "worlds": [{"W": 0, ...}, ...]}
Json table_to_json(const WorldTable& table);
/// Inverse of table_to_json. Throws Error on malformed input.
WorldTable table_from_json(const Json& json);

/// "W and H: dependent (expected)" for unconditioned statements,
/// "W and H given T: ..." otherwise.
std::string format_expectation(const DependenceVerdict& verdict);
/// "W and H: connected" / "separated" on the final graph.
std::string format_graph_verdict(const DependenceVerdict& verdict);

std::string format_edge(const CausalDag::Edge& edge);

Json verdict_to_json(const DependenceVerdict& verdict);
Json structure_to_json(const StructureReport& report);

}  // namespace tele::report

#endif  // TELE_REPORT_HPP_
