// Command-line front end: reproduces world tables, final-model reports,
// identification verdicts and causal reductions from `.tele` model files.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tele/errors.hpp"
#include "tele/identification.hpp"
#include "tele/intervention.hpp"
#include "tele/reduction.hpp"
#include "tele/report.hpp"
#include "tele/speclang.hpp"
#include "tele/teleology.hpp"

namespace {

using tele::report::Json;
namespace speclang = tele::speclang;

constexpr const char* kVersion = "tele 0.1.0";

enum Exit { kOk = 0, kFailure = 1, kNoneCompatible = 2, kTied = 3 };

struct Output {
  bool json = false;
  std::string command;
  Json result;
  std::vector<std::string> diagnostics;
  std::ostringstream text;

  void diagnose(const std::string& message) {
    diagnostics.push_back(message);
    if (!json) std::cerr << "tele: " << message << "\n";
  }

  void flush() const {
    if (json) {
      Json doc{{"command", command}, {"result", result}, {"diagnostics", diagnostics}};
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << text.str();
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tele::UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

speclang::ModelSpecDocument load_model(const std::string& path) {
  try {
    return speclang::parse_model(read_file(path));
  } catch (const tele::ParseError& e) {
    throw tele::ParseError(e.line(), e.column(), path + ": " + e.message());
  }
}

std::string join(const std::vector<std::string>& items, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string final_heading(const std::string& name, const tele::FinalModel& f) {
  return "final " + name + ": do(" + f.action() + "), effects {" + join(f.intended_effects()) +
         "}, goal " + f.goal().to_string();
}

// ------------------------------------------------------------ subcommands

int run_worlds(Output& out, const std::string& spec) {
  const auto scm = speclang::build_scm(load_model(spec));
  const auto table = tele::enumerate_worlds(scm);
  out.result = tele::report::table_to_json(table);
  out.text << tele::report::format_table(table);
  return kOk;
}

int run_intervene(Output& out, const std::string& spec, std::optional<std::string> target) {
  const auto doc = load_model(spec);
  if (!target) {
    if (!doc.intervention) throw tele::UsageError("intervene needs --do <var> (the model declares none)");
    target = doc.intervention->target;
  }
  const auto mstar = tele::do_surgery(speclang::build_scm(doc), {*target});
  const auto table = tele::enumerate_worlds_star(mstar);
  Json removed = Json::array();
  for (const auto& e : mstar.base().dag().edges())
    if (!mstar.surgered_dag().has_edge(e.first, e.second)) removed.push_back(Json::array({e.first, e.second}));
  out.result = {{"do", *target}, {"removed_edges", removed}, {"table", tele::report::table_to_json(table)}};
  out.text << tele::report::format_table(table);
  return kOk;
}

int run_finalize(Output& out, const std::string& spec, const std::string& name) {
  const auto doc = load_model(spec);
  const auto f = speclang::build_final(doc, name);
  const auto worlds = tele::compatible_worlds(f);
  const auto verdicts = tele::implied_dependencies(f);

  Json final_edges = Json::array();
  for (const auto& e : f.final_dag().edges()) final_edges.push_back(Json::array({e.first, e.second}));
  Json deps = Json::array();
  for (const auto& v : verdicts) deps.push_back(tele::report::verdict_to_json(v));
  out.result = {{"final", name},
                {"do", f.action()},
                {"effects", f.intended_effects()},
                {"goal", f.goal().to_string()},
                {"final_edges", final_edges},
                {"reachable", !worlds.empty()},
                {"compatible", tele::report::table_to_json(worlds)},
                {"dependencies", deps}};

  out.text << final_heading(name, f) << "\n";
  if (worlds.empty()) {
    out.text << "goal unreachable: no world under do(" << f.action() << ") satisfies " << f.goal().to_string() << "\n";
  }
  out.text << tele::report::format_table(worlds);
  out.text << "\nexpected under the goal, uniform over compatible worlds:\n";
  for (const auto& v : verdicts) out.text << tele::report::format_expectation(v) << "\n";
  out.text << "\nd-separation on the final graph:\n";
  for (const auto& v : verdicts) out.text << tele::report::format_graph_verdict(v) << "\n";
  return kOk;
}

int run_distinguish(Output& out, const std::string& spec, const std::vector<std::string>& names) {
  if (names.size() != 2) throw tele::UsageError("distinguish needs exactly two --final options");
  const auto doc = load_model(spec);
  const auto a = speclang::build_final(doc, names[0]);
  const auto b = speclang::build_final(doc, names[1]);
  const auto d = tele::distinguishable(a, b);
  const tele::WorldTable first(d.columns, d.only_first);
  const tele::WorldTable second(d.columns, d.only_second);
  out.result = {{"first", names[0]},
                {"second", names[1]},
                {"distinguishable", d.distinguishable},
                {"only_first", tele::report::table_to_json(first)},
                {"only_second", tele::report::table_to_json(second)}};
  out.text << names[0] << " vs " << names[1] << ": "
           << (d.distinguishable ? "distinguishable" : "not distinguishable") << "\n";
  if (d.distinguishable) {
    out.text << "\nworlds only under " << names[0] << ":\n" << tele::report::format_table(first);
    out.text << "\nworlds only under " << names[1] << ":\n" << tele::report::format_table(second);
  }
  return kOk;
}

int run_identify(Output& out, const std::string& spec, const std::string& data_path, bool enumerate,
                 std::size_t max_effects, bool specificity) {
  const auto doc = load_model(spec);
  const auto scm = speclang::build_scm(doc);
  tele::Dataset data = [&] {
    try {
      return tele::load_dataset(read_file(data_path), scm);
    } catch (const tele::ParseError& e) {
      throw tele::ParseError(e.line(), e.column(), data_path + ": " + e.message());
    }
  }();

  std::vector<std::string> names;
  std::vector<tele::FinalModel> candidates;
  if (enumerate) {
    const auto mstar = speclang::build_mstar(doc);
    for (auto& c : tele::enumerate_goal_hypotheses(mstar, max_effects)) {
      if (!c.buildable) {
        out.diagnose("skipped " + c.label() + ": reversing its arrows creates a cycle");
        continue;
      }
      candidates.push_back(tele::build_final_model(mstar, c.effects, tele::GoalPredicate({c.goal})));
      names.push_back(c.label());
    }
  } else {
    for (const auto& f : doc.finals) {
      candidates.push_back(speclang::build_final(doc, f.name));
      names.push_back(f.name);
    }
  }
  if (candidates.empty()) throw tele::UsageError("no goal hypotheses: declare finals or pass --enumerate");

  const auto ranked = tele::rank_hypotheses(candidates, data, {specificity});
  const auto outcome = tele::summarize(ranked);

  Json verdicts = Json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& v = ranked[i];
    Json violations = Json::array();
    for (const auto& r : v.violating_rows) {
      Json row = Json::object();
      for (std::size_t c = 0; c < data.columns().size(); ++c) row[data.columns()[c]] = r.values[c];
      row["count"] = r.count;
      violations.push_back(std::move(row));
    }
    Json checks = Json::array();
    for (const auto& c : v.dependence_checks) {
      auto verdict = [](bool indep) { return indep ? "independent" : "dependent"; };
      checks.push_back({{"x", c.statement.x},
                        {"y", c.statement.y},
                        {"given", c.statement.given},
                        {"expected", c.expected_independent ? Json(verdict(*c.expected_independent)) : Json(nullptr)},
                        {"observed", verdict(c.observed_independent)},
                        {"agree", c.agree}});
    }
    verdicts.push_back({{"rank", i + 1},
                        {"hypothesis", names[v.hypothesis]},
                        {"compatible", v.compatible},
                        {"support_compatible", v.support_compatible},
                        {"compatible_worlds", v.compatible_size},
                        {"equivalence_class", v.equivalence_class},
                        {"violating_rows", violations},
                        {"dependence_checks", checks}});
  }

  std::vector<std::string> best;
  if (outcome != tele::IdentificationOutcome::none) {
    const std::size_t smallest = ranked.front().compatible_size;
    for (const auto& v : ranked)
      if (v.compatible && v.compatible_size == smallest) best.push_back(names[v.hypothesis]);
  }
  const char* outcome_name = outcome == tele::IdentificationOutcome::unique ? "unique"
                             : outcome == tele::IdentificationOutcome::none ? "none"
                                                                             : "tied";
  out.result = {{"outcome", outcome_name},
                {"winner", outcome == tele::IdentificationOutcome::unique ? Json(best.front()) : Json(nullptr)},
                {"tied", outcome == tele::IdentificationOutcome::tied ? Json(best) : Json::array()},
                {"observations", data.total()},
                {"verdicts", verdicts}};

  // Plain table: rank, name, verdict, |worlds|, class, violations.
  std::size_t name_width = 10;
  for (const auto& n : names) name_width = std::max(name_width, n.size());
  auto pad = [](std::string s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
  out.text << pad("rank", 6) << pad("hypothesis", name_width + 2) << pad("verdict", 20) << pad("worlds", 8)
           << pad("class", 7) << "violations\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& v = ranked[i];
    std::string verdict = v.compatible           ? "compatible"
                          : v.support_compatible ? "dependence-mismatch"
                                                 : "violated";
    std::int64_t violations = 0;
    for (const auto& r : v.violating_rows) violations += r.count;
    out.text << pad(std::to_string(i + 1), 6) << pad(names[v.hypothesis], name_width + 2) << pad(verdict, 20)
             << pad(std::to_string(v.compatible_size), 8) << pad(std::to_string(v.equivalence_class), 7)
             << violations << "\n";
  }
  for (const auto& v : ranked) {
    for (const auto& c : v.dependence_checks) {
      if (c.agree) continue;
      out.text << names[v.hypothesis] << ": " << c.statement.x << " and " << c.statement.y << " expected "
               << (c.expected_independent ? (*c.expected_independent ? "independent" : "dependent") : "undefined")
               << ", observed " << (c.observed_independent ? "independent" : "dependent") << "\n";
    }
  }
  switch (outcome) {
    case tele::IdentificationOutcome::unique:
      out.text << "most specific compatible hypothesis: " << best.front() << "\n";
      return kOk;
    case tele::IdentificationOutcome::none:
      out.text << "no compatible hypothesis: no teleological explanation fits the data\n";
      return kNoneCompatible;
    case tele::IdentificationOutcome::tied:
      out.text << "tied most specific hypotheses: " << join(best) << "\n";
      return kTied;
  }
  return kFailure;
}

int run_reduce(Output& out, const std::string& spec, const std::string& name, std::optional<tele::Level> rest) {
  const auto doc = load_model(spec);
  const auto f = speclang::build_final(doc, name);
  if (!rest) rest = speclang::rest_level(doc);
  const auto r = tele::build_reduction(f, rest);
  const auto table = tele::enumerate_worlds(r.scm);
  const auto report = tele::compare_structures(f, r);
  const auto projected = tele::projected_worlds(r);

  out.result = {{"final", name},
                {"rest", r.rest_level},
                {"chosen", r.chosen_level},
                {"table", tele::report::table_to_json(table)},
                {"projected", tele::report::table_to_json(projected)},
                {"structure", tele::report::structure_to_json(report)}};

  auto edges = [](const std::vector<tele::CausalDag::Edge>& es) {
    std::vector<std::string> items;
    for (const auto& e : es) items.push_back(tele::report::format_edge(e));
    return items.empty() ? std::string("none") : join(items);
  };
  auto parents = [](const std::vector<std::string>& ps) { return ps.empty() ? std::string("nothing") : join(ps); };

  out.text << "reduction of " << name << " (rest " << r.action << " = " << r.rest_level << ")\n";
  out.text << tele::report::format_table(table);
  out.text << "\nstructure:\n";
  out.text << "edges only in final: " << edges(report.edges_only_in_final) << "\n";
  out.text << "edges only in reduction: " << edges(report.edges_only_in_reduction) << "\n";
  out.text << r.action << " listens to: " << parents(report.effective_parents_final) << " (final), "
           << parents(report.effective_parents_reduction) << " (reduction)\n";
  out.text << "action wiring: " << (report.wiring_differs ? "differs" : "same") << "\n";
  out.text << "projection onto " << join(r.base.names()) << ": " << tele::to_string(report.projection)
           << " to the compatible worlds (goal level per context: " << tele::to_string(report.achievability) << ")\n";
  out.text << "d-separation disagreements:";
  if (report.disagreements.empty()) out.text << " none";
  out.text << "\n";
  for (const auto& d : report.disagreements) {
    out.text << d.statement.x << " and " << d.statement.y;
    if (!d.statement.given.empty()) out.text << " given " << join(d.statement.given);
    out.text << ": " << (d.separated_in_final ? "separated" : "connected") << " in final, "
             << (d.separated_in_reduction ? "separated" : "connected") << " in reduction\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teleological interpretation of statistical dependence in discrete causal models", "tele"};
  app.fallthrough();
  app.require_subcommand(1);

  Output out;
  int seed = 0;
  app.add_flag("--json", out.json, "Machine-readable output");
  app.add_option("--seed", seed, "Reserved; currently unused");
  app.set_version_flag("--version", kVersion);

  std::string spec, data, final_name;
  std::vector<std::string> finals;
  std::optional<std::string> target;
  std::optional<tele::Level> rest;
  bool enumerate = false;
  bool no_specificity = false;
  std::size_t max_effects = 1;

  auto* worlds = app.add_subcommand("worlds", "Print every world of the model");
  worlds->add_option("spec", spec, "Model file (.tele)")->required();

  auto* intervene = app.add_subcommand("intervene", "Print the worlds after do(<var>)");
  intervene->add_option("spec", spec, "Model file (.tele)")->required();
  intervene->add_option("--do", target, "Variable to intervene on (defaults to the model's 'do')");

  auto* finalize = app.add_subcommand("finalize", "Compatible worlds and implied (in)dependences of a final model");
  finalize->add_option("spec", spec, "Model file (.tele)")->required();
  finalize->add_option("--final", final_name, "Final model name")->required();

  auto* distinguish = app.add_subcommand("distinguish", "Can two final models be told apart from observations?");
  distinguish->add_option("spec", spec, "Model file (.tele)")->required();
  distinguish->add_option("--final", finals, "Final model name (twice)")->required()->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* identify = app.add_subcommand("identify", "Rank goal hypotheses against observational data");
  identify->add_option("spec", spec, "Model file (.tele)")->required();
  identify->add_option("data", data, "Observations (CSV)")->required();
  identify->add_flag("--enumerate", enumerate, "Rank every equality goal over the action's effects");
  identify->add_option("--max-effects", max_effects, "Largest intended-effect set to enumerate")->check(CLI::PositiveNumber);
  identify->add_flag("--no-specificity", no_specificity, "Do not prefer smaller compatible sets when ranking");

  auto* reduce = app.add_subcommand("reduce", "Causal reduction of a final model and its structural diff");
  reduce->add_option("spec", spec, "Model file (.tele)")->required();
  reduce->add_option("--final", final_name, "Final model name")->required();
  reduce->add_option("--rest", rest, "Rest level of the action (defaults to the model's 'rest' or its minimum)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  int code = kFailure;
  try {
    if (worlds->parsed()) {
      out.command = "worlds";
      code = run_worlds(out, spec);
    } else if (intervene->parsed()) {
      out.command = "intervene";
      code = run_intervene(out, spec, target);
    } else if (finalize->parsed()) {
      out.command = "finalize";
      code = run_finalize(out, spec, final_name);
    } else if (distinguish->parsed()) {
      out.command = "distinguish";
      code = run_distinguish(out, spec, finals);
    } else if (identify->parsed()) {
      out.command = "identify";
      code = run_identify(out, spec, data, enumerate, max_effects, !no_specificity);
    } else if (reduce->parsed()) {
      out.command = "reduce";
      code = run_reduce(out, spec, final_name, rest);
    }
  } catch (const tele::Error& e) {
    out.result = nullptr;
    out.text.str("");
    out.diagnose(std::string("error: ") + e.what());
    code = kFailure;
  }
  out.flush();
  return code;
}
