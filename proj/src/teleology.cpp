#include "tele/teleology.hpp"

#include <algorithm>

#include "tele/errors.hpp"

namespace tele {

std::string_view comparison_symbol(Comparison op) {
  switch (op) {
    case Comparison::equal: return "=";
    case Comparison::less: return "<";
    case Comparison::greater: return ">";
    case Comparison::less_equal: return "<=";
    case Comparison::greater_equal: return ">=";
    case Comparison::not_equal: return "!=";
  }
  return "?";
}

bool GoalAtom::holds(Level value) const {
  switch (op) {
    case Comparison::equal: return value == level;
    case Comparison::less: return value < level;
    case Comparison::greater: return value > level;
    case Comparison::less_equal: return value <= level;
    case Comparison::greater_equal: return value >= level;
    case Comparison::not_equal: return value != level;
  }
  return false;
}

std::string GoalAtom::to_string() const {
  return variable + " " + std::string(comparison_symbol(op)) + " " + std::to_string(level);
}

GoalPredicate::GoalPredicate(std::vector<GoalAtom> conjuncts) : conjuncts_(std::move(conjuncts)) {
  if (conjuncts_.empty()) throw Error("goal needs at least one comparison");
}

std::vector<std::string> GoalPredicate::variables() const {
  std::vector<std::string> out;
  for (const auto& a : conjuncts_)
    if (std::find(out.begin(), out.end(), a.variable) == out.end()) out.push_back(a.variable);
  return out;
}

bool GoalPredicate::holds(const WorldTable& table, const World& world) const {
  return std::all_of(conjuncts_.begin(), conjuncts_.end(), [&](const GoalAtom& a) {
    return a.holds(table.value(world, a.variable));
  });
}

std::string GoalPredicate::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < conjuncts_.size(); ++i) {
    if (i) out += " & ";
    out += conjuncts_[i].to_string();
  }
  return out;
}

void validate_goal(const GoalPredicate& goal, const Scm& scm) {
  std::vector<const Variable*> vars;
  const auto names = goal.variables();
  for (const auto& n : names) vars.push_back(&scm.variable(n));
  bool satisfiable = false;
  for_each_combination(vars, [&](std::span<const Level> combo) {
    if (satisfiable) return;
    satisfiable = std::all_of(goal.conjuncts().begin(), goal.conjuncts().end(), [&](const GoalAtom& a) {
      auto pos = std::find(names.begin(), names.end(), a.variable) - names.begin();
      return a.holds(combo[static_cast<std::size_t>(pos)]);
    });
  });
  if (!satisfiable)
    throw TeleologicalValidityError("goal " + goal.to_string() + " is unsatisfiable over the declared domains");
}

FinalModel build_final_model(const MStarModel& m, std::vector<std::string> intended,
                             GoalPredicate goal) {
  const CausalDag& base = m.base().dag();
  const std::string& action = m.target();
  if (intended.empty()) throw TeleologicalValidityError("a final model needs at least one intended effect");

  const auto effects = base.descendants(action);
  for (const auto& e : intended) {
    base.index_of(e);
    if (std::find(effects.begin(), effects.end(), e) == effects.end())
      throw TeleologicalValidityError(e + " is not a causal effect of " + action);
  }
  // Declaration order, no repeats.
  std::sort(intended.begin(), intended.end(), [&](const std::string& a, const std::string& b) {
    return base.index_of(a) < base.index_of(b);
  });
  intended.erase(std::unique(intended.begin(), intended.end()), intended.end());

  validate_goal(goal, m.base());
  for (const auto& v : goal.variables())
    if (std::find(intended.begin(), intended.end(), v) == intended.end())
      throw TeleologicalValidityError("goal mentions " + v + ", which is not an intended effect");

  const CausalDag& surgered = m.surgered_dag();
  std::vector<CausalDag::Edge> edges;
  for (const auto& [p, c] : surgered.edges()) {
    bool reversed = p == action && std::find(intended.begin(), intended.end(), c) != intended.end();
    if (reversed)
      edges.emplace_back(c, p);
    else
      edges.emplace_back(p, c);
  }
  for (const auto& e : intended)
    if (!surgered.has_edge(action, e)) edges.emplace_back(e, action);

  CausalDag final_dag(surgered.nodes(), std::move(edges));
  return FinalModel(m, std::move(intended), std::move(goal), std::move(final_dag));
}

WorldTable compatible_worlds(const FinalModel& f) {
  const WorldTable all = enumerate_worlds_star(f.mstar());
  return all.filter([&](const World& w) { return f.goal().holds(all, w); });
}

std::vector<DependenceVerdict> implied_dependencies(const FinalModel& f) {
  const WorldTable worlds = compatible_worlds(f);
  std::vector<DependenceVerdict> out;
  for (auto& stmt : pairwise_statements(f.final_dag().nodes())) {
    DependenceVerdict v{stmt, d_separated(f.final_dag(), stmt), std::nullopt};
    if (!worlds.empty()) v.independent = uniform_independent(worlds, stmt);
    out.push_back(std::move(v));
  }
  return out;
}

Distinction distinguishable(const FinalModel& first, const FinalModel& second) {
  if (!(first.mstar() == second.mstar()))
    throw ComparisonError("final models are built over different intervened models");
  const WorldTable a = compatible_worlds(first);
  const WorldTable b = compatible_worlds(second);
  Distinction d;
  d.columns = a.columns();
  std::set_difference(a.rows().begin(), a.rows().end(), b.rows().begin(), b.rows().end(),
                      std::back_inserter(d.only_first));
  std::set_difference(b.rows().begin(), b.rows().end(), a.rows().begin(), a.rows().end(),
                      std::back_inserter(d.only_second));
  d.distinguishable = !d.only_first.empty() || !d.only_second.empty();
  return d;
}

std::string GoalCandidate::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (i) out += ",";
    out += effects[i];
  }
  return out + "}:" + goal.variable + std::string(comparison_symbol(goal.op)) +
         std::to_string(goal.level);
}

namespace {

// All k-subsets of positions [0, n), lexicographic.
void subsets_of_size(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    out.push_back(pick);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

std::vector<GoalCandidate> enumerate_goal_hypotheses(const MStarModel& m, std::size_t max_effects,
                                                     std::size_t cap) {
  if (max_effects == 0) throw UsageError("max_effects must be at least 1");
  const auto effects = m.base().dag().descendants(m.target());
  const std::size_t limit = std::min(max_effects, effects.size());

  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t k = 1; k <= limit; ++k) subsets_of_size(effects.size(), k, subsets);

  std::size_t required = 0;
  for (const auto& s : subsets)
    for (std::size_t i : s) required += m.base().variable(effects[i]).domain.size();
  if (required > cap) throw BudgetError(required, cap);

  const WorldTable all = enumerate_worlds_star(m);
  std::vector<GoalCandidate> out;
  out.reserve(required);
  for (const auto& s : subsets) {
    std::vector<std::string> chosen;
    for (std::size_t i : s) chosen.push_back(effects[i]);
    for (const auto& var : chosen) {
      const std::size_t col = all.column_index(var);
      for (Level level : m.base().variable(var).domain) {
        GoalCandidate c;
        c.effects = chosen;
        c.goal = GoalAtom{var, Comparison::equal, level};
        c.compatible = all.filter([&](const World& w) { return w[col] == level; });
        try {
          build_final_model(m, chosen, GoalPredicate({c.goal}));
        } catch (const StructuralError&) {
          c.buildable = false;
        }
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace tele
