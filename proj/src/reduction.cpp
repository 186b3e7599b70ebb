#include "tele/reduction.hpp"

#include <algorithm>
#include <set>

#include "tele/errors.hpp"
#include "tele/intervention.hpp"

namespace tele {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string fresh_name(const std::string& wanted, const std::set<std::string>& taken) {
  std::string name = wanted;
  while (taken.contains(name)) name += "'";
  return name;
}

// Value of `goal_var` with the action held at `rest`, given levels for
// every context ancestor of it (and possibly more). Only the action and its
// descendants are recomputed.
Level value_at_rest(const Scm& base, const std::string& action, Level rest,
                    const std::map<std::string, Level>& known, const std::string& goal_var) {
  std::map<std::string, Level> values = known;
  values[action] = rest;
  const auto effects = base.dag().descendants(action);
  std::vector<Level> args;
  for (const auto& n : base.dag().topological_order()) {
    if (!contains(effects, n)) continue;
    const Mechanism* m = base.mechanism(n);
    args.clear();
    bool ready = true;
    for (const auto& p : m->parents()) {
      auto it = values.find(p);
      if (it == values.end()) {
        ready = false;
        break;
      }
      args.push_back(it->second);
    }
    if (ready) values[n] = m->evaluate(args);
    if (n == goal_var) break;
  }
  return values.at(goal_var);
}

}  // namespace

std::string_view to_string(Achievability a) {
  switch (a) {
    case Achievability::unique: return "unique";
    case Achievability::multiple: return "multiple";
    case Achievability::unreachable: return "unreachable";
  }
  return "?";
}

std::string_view to_string(ProjectionRelation p) {
  switch (p) {
    case ProjectionRelation::equal: return "equal";
    case ProjectionRelation::subset: return "subset";
    case ProjectionRelation::differs: return "differs";
  }
  return "?";
}

ReductionModel build_reduction(const FinalModel& f, std::optional<Level> rest) {
  const Scm& base = f.mstar().base();
  const CausalDag& dag = base.dag();
  const std::string& action = f.action();
  const Variable& action_var = base.variable(action);
  const Level rest_level = rest.value_or(action_var.min_level());
  if (!action_var.has_level(rest_level))
    throw DomainError("rest level " + std::to_string(rest_level) + " is outside the domain of " + action);

  const auto effects = dag.descendants(action);
  std::vector<std::string> goal_vars;
  for (const auto& n : dag.nodes())
    if (contains(f.goal().variables(), n)) goal_vars.push_back(n);

  ReductionModel r{base, base, {}, {}, {}, {}, action, {}, {}, rest_level, rest_level, Achievability::unique};
  for (const auto& n : dag.nodes()) {
    if (n == action) continue;
    if (contains(effects, n)) {
      if (!contains(goal_vars, n)) r.downstream.push_back(n);
    } else {
      r.context.push_back(n);
    }
  }

  std::set<std::string> taken(dag.nodes().begin(), dag.nodes().end());
  std::map<std::string, std::string> pre_of, post_of;
  for (const auto& g : goal_vars) {
    pre_of[g] = fresh_name(g + "₀", taken);
    taken.insert(pre_of[g]);
    post_of[g] = fresh_name(g + "₁", taken);
    taken.insert(post_of[g]);
    r.pre_state.push_back(pre_of[g]);
    r.post_state.push_back(post_of[g]);
  }
  r.intention = fresh_name("I", taken);
  for (const auto& n : dag.nodes()) r.provenance[n] = n;
  for (const auto& g : goal_vars) {
    r.provenance.erase(g);
    r.provenance[pre_of[g]] = g;
    r.provenance[post_of[g]] = g;
  }
  r.provenance[r.intention] = r.intention;

  // Per context: the M* world at every action level.
  const WorldTable mstar = enumerate_worlds_star(f.mstar());
  const std::size_t action_col = mstar.column_index(action);
  std::vector<std::size_t> context_cols;
  for (const auto& c : r.context) context_cols.push_back(mstar.column_index(c));
  struct ContextInfo {
    std::vector<Level> achievers;
    World pre;  // goal variables at rest
  };
  std::map<World, ContextInfo> contexts;
  for (const auto& w : mstar.rows()) {
    World c;
    for (std::size_t i : context_cols) c.push_back(w[i]);
    ContextInfo& info = contexts[c];
    if (f.goal().holds(mstar, w)) info.achievers.push_back(w[action_col]);
    if (w[action_col] == rest_level)
      for (const auto& g : goal_vars) info.pre.push_back(mstar.value(w, g));
  }

  bool any_achievable = false;
  for (const auto& [c, info] : contexts) {
    if (info.achievers.empty()) {
      r.achievability = Achievability::unreachable;
    } else {
      any_achievable = true;
      if (info.achievers.size() > 1 && r.achievability == Achievability::unique)
        r.achievability = Achievability::multiple;
    }
  }
  if (!any_achievable)
    throw ReductionError("goal " + f.goal().to_string() + " is not achievable by any level of " +
                         action + " in any context");

  // The intention per pre-state, and the level it triggers.
  std::map<World, int> intend;
  std::optional<Level> chosen;
  for (const auto& [c, info] : contexts) {
    const bool met_at_rest = std::find(info.achievers.begin(), info.achievers.end(), rest_level) != info.achievers.end();
    const int want = !met_at_rest && !info.achievers.empty() ? 1 : 0;
    auto [it, inserted] = intend.emplace(info.pre, want);
    if (!inserted && it->second != want)
      throw ReductionError("the intention is not determined by the pre-action state of " +
                           f.goal().to_string());
    if (want) {
      const Level least = info.achievers.front();
      if (chosen && *chosen != least)
        throw ReductionError("the level of " + action + " that reaches the goal depends on more than the intention");
      chosen = least;
    }
  }
  if (!chosen) {
    for (Level l : action_var.domain)
      if (l != rest_level) {
        chosen = l;
        break;
      }
  }
  r.chosen_level = *chosen;

  // Assemble the unrolled model.
  std::vector<Variable> vars;
  std::vector<CausalDag::Edge> edges;
  std::vector<Mechanism> mechs;
  auto rename_post = [&](const std::string& n) { return post_of.contains(n) ? post_of[n] : n; };

  for (const auto& c : r.context) {
    vars.push_back(base.variable(c));
    for (const auto& p : dag.parents(c)) edges.emplace_back(p, c);
    if (const Mechanism* m = base.mechanism(c)) mechs.push_back(*m);
  }

  std::vector<std::string> exogenous_context;
  for (const auto& c : r.context)
    if (!base.mechanism(c)) exogenous_context.push_back(c);
  const CausalDag& surgered = f.mstar().surgered_dag();
  for (const auto& g : goal_vars) {
    Variable pre = base.variable(g);
    pre.name = pre_of[g];
    std::vector<std::string> parents;
    for (const auto& a : surgered.ancestors(g))
      if (contains(r.context, a)) parents.push_back(a);
    if (parents.empty()) parents = exogenous_context;
    if (parents.empty())
      throw ReductionError("no context variable to anchor the pre-action value of " + g);
    std::vector<Variable> parent_vars;
    for (const auto& p : parents) {
      parent_vars.push_back(base.variable(p));
      edges.emplace_back(p, pre.name);
    }
    mechs.push_back(Mechanism::tabulate(pre, parent_vars, [&](std::span<const Level> combo) {
      std::map<std::string, Level> known;
      for (std::size_t i = 0; i < parents.size(); ++i) known[parents[i]] = combo[i];
      return value_at_rest(base, action, rest_level, known, g);
    }));
    vars.push_back(std::move(pre));
  }

  const Variable intention = Variable::range(r.intention, 0, 1);
  {
    std::vector<Variable> parent_vars;
    for (const auto& g : goal_vars) {
      parent_vars.push_back(vars[r.context.size() + parent_vars.size()]);
      edges.emplace_back(pre_of[g], r.intention);
    }
    mechs.push_back(Mechanism::tabulate(intention, parent_vars, [&](std::span<const Level> combo) {
      auto it = intend.find(World(combo.begin(), combo.end()));
      return it == intend.end() ? 0 : it->second;
    }));
  }
  vars.push_back(intention);

  vars.push_back(action_var);
  edges.emplace_back(r.intention, action);
  mechs.push_back(Mechanism(action, {r.intention}, {{{0}, rest_level}, {{1}, r.chosen_level}}));

  std::vector<std::string> after = goal_vars;
  after.insert(after.end(), r.downstream.begin(), r.downstream.end());
  for (const auto& n : dag.nodes()) {
    if (!contains(after, n)) continue;
    Variable v = base.variable(n);
    v.name = rename_post(n);
    const Mechanism* m = base.mechanism(n);
    std::vector<std::string> parents;
    for (const auto& p : m->parents()) {
      parents.push_back(rename_post(p));
      edges.emplace_back(rename_post(p), v.name);
    }
    mechs.emplace_back(v.name, std::move(parents), m->table());
  }
  // Post-state copies first, then downstream, each in declaration order.
  for (const auto& g : goal_vars) {
    Variable v = base.variable(g);
    v.name = post_of[g];
    vars.push_back(std::move(v));
  }
  for (const auto& d : r.downstream) vars.push_back(base.variable(d));

  r.scm = Scm(std::move(vars), std::move(edges), std::move(mechs));
  return r;
}

Scm erase_intention(const ReductionModel& r) {
  const Mechanism* intent = r.scm.mechanism(r.intention);
  const Mechanism* act = r.scm.mechanism(r.action);
  std::vector<Variable> vars;
  for (const auto& v : r.scm.variables())
    if (v.name != r.intention) vars.push_back(v);
  std::vector<CausalDag::Edge> edges;
  for (const auto& e : r.scm.dag().edges()) {
    if (e.first == r.intention || e.second == r.intention) continue;
    edges.push_back(e);
  }
  for (const auto& p : intent->parents()) edges.emplace_back(p, r.action);

  std::vector<Mechanism> mechs;
  for (const auto& m : r.scm.mechanisms()) {
    if (m.child() == r.intention) continue;
    if (m.child() != r.action) {
      mechs.push_back(m);
      continue;
    }
    Mechanism::Table composed;
    for (const auto& [key, i] : intent->table()) composed[key] = act->evaluate(std::vector<Level>{i});
    mechs.emplace_back(r.action, intent->parents(), std::move(composed));
  }
  return Scm(std::move(vars), std::move(edges), std::move(mechs));
}

CausalDag projected_dag(const ReductionModel& r) {
  std::set<CausalDag::Edge> edges(r.scm.dag().edges().begin(), r.scm.dag().edges().end());
  std::vector<std::string> erased = r.pre_state;
  erased.push_back(r.intention);
  for (const auto& gone : erased) {
    std::vector<std::string> in, out;
    for (auto it = edges.begin(); it != edges.end();) {
      if (it->second == gone) {
        in.push_back(it->first);
        it = edges.erase(it);
      } else if (it->first == gone) {
        out.push_back(it->second);
        it = edges.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& p : in)
      for (const auto& c : out) edges.emplace(p, c);
  }
  std::vector<CausalDag::Edge> renamed;
  std::set<CausalDag::Edge> seen;
  for (const auto& [p, c] : edges) {
    CausalDag::Edge e{r.provenance.at(p), r.provenance.at(c)};
    if (e.first != e.second && seen.insert(e).second) renamed.push_back(e);
  }
  return CausalDag(r.base.names(), std::move(renamed));
}

WorldTable projected_worlds(const ReductionModel& r) {
  const WorldTable worlds = enumerate_worlds(r.scm);
  std::vector<std::string> keep;
  for (const auto& n : r.base.names()) {
    for (const auto& v : r.scm.names()) {
      if (contains(r.pre_state, v) || v == r.intention) continue;
      if (r.provenance.at(v) == n) keep.push_back(v);
    }
  }
  const WorldTable projected = worlds.project(keep);
  return WorldTable(r.base.names(), projected.rows());
}

StructureReport compare_structures(const FinalModel& f, const ReductionModel& r) {
  if (!(f.mstar().base() == r.base))
    throw ComparisonError("the reduction was built from a different base model");
  StructureReport report;
  const CausalDag& fin = f.final_dag();
  const CausalDag red = projected_dag(r);

  std::set_difference(fin.edges().begin(), fin.edges().end(), red.edges().begin(), red.edges().end(),
                      std::back_inserter(report.edges_only_in_final),
                      [&](const auto& a, const auto& b) {
                        return std::pair(fin.index_of(a.first), fin.index_of(a.second)) <
                               std::pair(fin.index_of(b.first), fin.index_of(b.second));
                      });
  std::set_difference(red.edges().begin(), red.edges().end(), fin.edges().begin(), fin.edges().end(),
                      std::back_inserter(report.edges_only_in_reduction),
                      [&](const auto& a, const auto& b) {
                        return std::pair(fin.index_of(a.first), fin.index_of(a.second)) <
                               std::pair(fin.index_of(b.first), fin.index_of(b.second));
                      });

  report.action_parents_final = fin.parents(f.action());
  report.action_parents_reduction = red.parents(r.action);

  if (compatible_worlds(f) != enumerate_worlds_star(f.mstar()))
    report.effective_parents_final = report.action_parents_final;
  const WorldTable reduction_worlds = enumerate_worlds(r.scm);
  const std::size_t ic = reduction_worlds.column_index(r.intention);
  const bool intention_varies =
      std::any_of(reduction_worlds.rows().begin(), reduction_worlds.rows().end(),
                  [&](const World& w) { return w[ic] != reduction_worlds.rows().front()[ic]; });
  if (intention_varies) report.effective_parents_reduction = report.action_parents_reduction;
  report.wiring_differs = report.effective_parents_final != report.effective_parents_reduction;

  for (auto& stmt : pairwise_statements(fin.nodes())) {
    const bool a = d_separated(fin, stmt);
    const bool b = d_separated(red, stmt);
    if (a != b) report.disagreements.push_back({std::move(stmt), a, b});
  }

  const WorldTable projected = projected_worlds(r);
  const WorldTable compatible = compatible_worlds(f);
  if (projected == compatible)
    report.projection = ProjectionRelation::equal;
  else if (std::includes(compatible.rows().begin(), compatible.rows().end(), projected.rows().begin(),
                         projected.rows().end()))
    report.projection = ProjectionRelation::subset;
  else
    report.projection = ProjectionRelation::differs;
  report.achievability = r.achievability;
  return report;
}

}  // namespace tele
