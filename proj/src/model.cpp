#include "tele/model.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>

#include "tele/errors.hpp"

namespace tele {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string tuple_string(std::span<const Level> levels) {
  std::string out = "(";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(levels[i]);
  }
  return out + ")";
}

}  // namespace

// ---------------------------------------------------------------- Variable

Variable Variable::range(std::string name, Level lo, Level hi) {
  Variable v{std::move(name), {}};
  for (Level l = lo; l <= hi; ++l) v.domain.push_back(l);
  return v;
}

bool Variable::has_level(Level level) const {
  return std::binary_search(domain.begin(), domain.end(), level);
}

void validate_variable(const Variable& variable) {
  if (variable.name.empty()) throw StructuralError("", "variable with empty name");
  if (variable.domain.size() < 2)
    throw StructuralError(variable.name,
                          "variable " + variable.name + " needs at least two levels");
  for (std::size_t i = 1; i < variable.domain.size(); ++i) {
    if (variable.domain[i] <= variable.domain[i - 1])
      throw StructuralError(variable.name, "domain of " + variable.name +
                                               " must be strictly increasing");
  }
}

// --------------------------------------------------------------- CausalDag

CausalDag::CausalDag(std::vector<std::string> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second)
      throw StructuralError(nodes_[i], "duplicate node " + nodes_[i]);
  }
  parents_.resize(nodes_.size());
  children_.resize(nodes_.size());

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [from, to] : edges) {
    auto f = index_.find(from);
    if (f == index_.end())
      throw StructuralError(from, "edge " + from + " -> " + to + " uses undeclared node " + from);
    auto t = index_.find(to);
    if (t == index_.end())
      throw StructuralError(to, "edge " + from + " -> " + to + " uses undeclared node " + to);
    if (f->second == t->second) throw StructuralError(from, "self loop on " + from);
    if (!seen.emplace(f->second, t->second).second)
      throw StructuralError(to, "duplicate edge " + from + " -> " + to);
  }
  for (const auto& [p, c] : seen) {
    edges_.emplace_back(nodes_[p], nodes_[c]);
    parents_[c].push_back(p);
    children_[p].push_back(c);
  }
  for (auto& ps : parents_) std::sort(ps.begin(), ps.end());

  // Kahn; whatever survives sits on or below a cycle.
  std::vector<std::size_t> indegree(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indegree[i] = parents_[i].size();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t done = 0;
  while (!ready.empty()) {
    std::size_t n = ready.front();
    ready.pop_front();
    ++done;
    for (std::size_t c : children_[n])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  if (done != nodes_.size()) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (indegree[i] == 0) continue;
      auto below = reach(i, true);
      if (std::find(below.begin(), below.end(), i) != below.end())
        throw StructuralError(nodes_[i], "cycle through " + nodes_[i]);
    }
    throw StructuralError("", "graph has a cycle");
  }
}

bool CausalDag::has_node(std::string_view name) const { return index_.contains(name); }

bool CausalDag::has_edge(std::string_view parent, std::string_view child) const {
  auto p = index_.find(parent);
  auto c = index_.find(child);
  if (p == index_.end() || c == index_.end()) return false;
  const auto& ps = parents_[c->second];
  return std::binary_search(ps.begin(), ps.end(), p->second);
}

std::size_t CausalDag::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw LookupError("unknown variable " + std::string(name));
  return it->second;
}

std::vector<std::string> CausalDag::parents(std::string_view name) const {
  std::vector<std::string> out;
  for (std::size_t p : parents_[index_of(name)]) out.push_back(nodes_[p]);
  return out;
}

std::vector<std::string> CausalDag::children(std::string_view name) const {
  std::vector<std::size_t> cs = children_[index_of(name)];
  std::sort(cs.begin(), cs.end());
  std::vector<std::string> out;
  for (std::size_t c : cs) out.push_back(nodes_[c]);
  return out;
}

std::vector<std::size_t> CausalDag::reach(std::size_t start, bool downward) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::size_t> stack{start};
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    for (std::size_t m : downward ? children_[n] : parents_[n]) {
      if (!seen[m]) {
        seen[m] = true;
        stack.push_back(m);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<std::string> CausalDag::descendants(std::string_view name) const {
  std::size_t start = index_of(name);
  std::vector<std::string> out;
  for (std::size_t i : reach(start, true))
    if (i != start) out.push_back(nodes_[i]);
  return out;
}

std::vector<std::string> CausalDag::ancestors(std::string_view name) const {
  std::size_t start = index_of(name);
  std::vector<std::string> out;
  for (std::size_t i : reach(start, false))
    if (i != start) out.push_back(nodes_[i]);
  return out;
}

std::vector<std::string> CausalDag::topological_order() const {
  // Smallest declaration position first among ready nodes, so the order is
  // stable.
  std::vector<std::size_t> indegree(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indegree[i] = parents_[i].size();
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (indegree[i] == 0) ready.insert(i);
  std::vector<std::string> out;
  while (!ready.empty()) {
    std::size_t n = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(nodes_[n]);
    for (std::size_t c : children_[n])
      if (--indegree[c] == 0) ready.insert(c);
  }
  return out;
}

CausalDag CausalDag::without_inbound(std::string_view name) const {
  index_of(name);
  std::vector<Edge> kept;
  for (const auto& e : edges_)
    if (e.second != name) kept.push_back(e);
  return CausalDag(nodes_, std::move(kept));
}

// --------------------------------------------------------------- Mechanism

Mechanism::Mechanism(std::string child, std::vector<std::string> parents, Table table)
    : child_(std::move(child)), parents_(std::move(parents)), table_(std::move(table)) {
  for (const auto& [key, value] : table_) {
    if (key.size() != parents_.size())
      throw StructuralError(child_, "mechanism for " + child_ + " has a row of arity " +
                                        std::to_string(key.size()) + ", expected " +
                                        std::to_string(parents_.size()));
  }
}

void for_each_combination(const std::vector<const Variable*>& variables,
                          const std::function<void(std::span<const Level>)>& visit) {
  std::vector<std::size_t> pos(variables.size(), 0);
  std::vector<Level> levels(variables.size());
  for (std::size_t i = 0; i < variables.size(); ++i) levels[i] = variables[i]->domain.front();
  while (true) {
    visit(levels);
    std::size_t i = variables.size();
    while (i > 0) {
      --i;
      if (++pos[i] < variables[i]->domain.size()) {
        levels[i] = variables[i]->domain[pos[i]];
        break;
      }
      pos[i] = 0;
      levels[i] = variables[i]->domain.front();
      if (i == 0) return;
    }
    if (variables.empty()) return;
  }
}

Mechanism Mechanism::tabulate(const Variable& child, const std::vector<Variable>& parents,
                              const std::function<Level(std::span<const Level>)>& fn) {
  std::vector<const Variable*> ptrs;
  std::vector<std::string> names;
  for (const auto& p : parents) {
    ptrs.push_back(&p);
    names.push_back(p.name);
  }
  Table table;
  for_each_combination(ptrs, [&](std::span<const Level> combo) {
    Level out = fn(combo);
    if (!child.has_level(out))
      throw StructuralError(child.name, "mechanism for " + child.name + " yields " +
                                            std::to_string(out) + " at " + tuple_string(combo) +
                                            ", outside the domain of " + child.name);
    table.emplace(std::vector<Level>(combo.begin(), combo.end()), out);
  });
  return Mechanism(child.name, std::move(names), std::move(table));
}

Mechanism Mechanism::sum(const Variable& child, const std::vector<Variable>& parents) {
  return tabulate(child, parents, [](std::span<const Level> combo) {
    Level total = 0;
    for (Level l : combo) total += l;
    return total;
  });
}

Level Mechanism::evaluate(std::span<const Level> parent_levels) const {
  auto it = table_.find(std::vector<Level>(parent_levels.begin(), parent_levels.end()));
  if (it == table_.end())
    throw StructuralError(child_, "mechanism for " + child_ + " has no row for " +
                                      tuple_string(parent_levels));
  return it->second;
}

// --------------------------------------------------------------------- Scm

namespace {

std::vector<std::string> names_of(const std::vector<Variable>& variables) {
  std::vector<std::string> out;
  for (const auto& v : variables) {
    validate_variable(v);
    out.push_back(v.name);
  }
  return out;
}

}  // namespace

Scm::Scm(std::vector<Variable> variables, std::vector<CausalDag::Edge> edges,
         std::vector<Mechanism> mechanisms)
    : variables_(std::move(variables)), dag_(names_of(variables_), std::move(edges)) {
  mechanism_of_.resize(variables_.size());
  std::vector<std::optional<Mechanism>> slots(variables_.size());
  for (auto& m : mechanisms) {
    if (!dag_.has_node(m.child()))
      throw StructuralError(m.child(), "mechanism for undeclared variable " + m.child());
    std::size_t i = dag_.index_of(m.child());
    if (slots[i]) throw StructuralError(m.child(), "two mechanisms for " + m.child());
    slots[i] = std::move(m);
  }
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const Variable& v = variables_[i];
    auto dag_parents = dag_.parents(v.name);
    if (dag_parents.empty()) {
      if (slots[i])
        throw StructuralError(v.name, "exogenous variable " + v.name + " must not have a mechanism");
      continue;
    }
    if (!slots[i]) throw StructuralError(v.name, "missing mechanism for " + v.name);
    const Mechanism& m = *slots[i];
    std::vector<std::string> mech_parents = m.parents();
    std::sort(mech_parents.begin(), mech_parents.end());
    std::sort(dag_parents.begin(), dag_parents.end());
    if (mech_parents != dag_parents)
      throw StructuralError(v.name, "mechanism parents of " + v.name +
                                        " differ from its graph parents");
    std::vector<const Variable*> parent_vars;
    for (const auto& p : m.parents()) parent_vars.push_back(&variables_[dag_.index_of(p)]);
    std::size_t expected = 0;
    for_each_combination(parent_vars, [&](std::span<const Level> combo) {
      ++expected;
      auto it = m.table().find(std::vector<Level>(combo.begin(), combo.end()));
      if (it == m.table().end())
        throw StructuralError(v.name, "mechanism for " + v.name + " is not total: missing " +
                                          tuple_string(combo));
      if (!v.has_level(it->second))
        throw StructuralError(v.name, "mechanism for " + v.name + " maps " + tuple_string(combo) +
                                          " to " + std::to_string(it->second) +
                                          ", outside its domain");
    });
    if (m.table().size() != expected)
      throw StructuralError(v.name, "mechanism for " + v.name + " has rows outside its parents' domains");
  }
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (slots[i]) {
      mechanism_of_[i] = mechanisms_.size();
      mechanisms_.push_back(std::move(*slots[i]));
    }
  }
}

const Variable& Scm::variable(std::string_view name) const {
  return variables_[dag_.index_of(name)];
}

const Mechanism* Scm::mechanism(std::string_view name) const {
  const auto& slot = mechanism_of_[dag_.index_of(name)];
  return slot ? &mechanisms_[*slot] : nullptr;
}

std::vector<std::string> Scm::exogenous() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (!mechanism_of_[i]) out.push_back(variables_[i].name);
  return out;
}

// -------------------------------------------------------------- WorldTable

WorldTable::WorldTable(std::vector<std::string> columns, std::vector<World> rows)
    : columns_(std::move(columns)), rows_(std::move(rows)) {
  for (const auto& r : rows_)
    if (r.size() != columns_.size())
      throw Error("world of width " + std::to_string(r.size()) + " in a table with " +
                  std::to_string(columns_.size()) + " columns");
  std::sort(rows_.begin(), rows_.end());
  rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
}

bool WorldTable::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t WorldTable::column_index(std::string_view name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw LookupError("unknown variable " + std::string(name));
  return static_cast<std::size_t>(it - columns_.begin());
}

bool WorldTable::contains(const World& world) const {
  return std::binary_search(rows_.begin(), rows_.end(), world);
}

WorldTable WorldTable::filter(const std::function<bool(const World&)>& keep) const {
  WorldTable out;
  out.columns_ = columns_;
  for (const auto& r : rows_)
    if (keep(r)) out.rows_.push_back(r);
  return out;
}

WorldTable WorldTable::project(const std::vector<std::string>& columns) const {
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(column_index(c));
  std::vector<World> rows;
  for (const auto& r : rows_) {
    World w;
    for (std::size_t i : idx) w.push_back(r[i]);
    rows.push_back(std::move(w));
  }
  return WorldTable(columns, std::move(rows));
}

// --------------------------------------------------- IndependenceStatement

IndependenceStatement::IndependenceStatement(std::string x_, std::string y_,
                                             std::vector<std::string> given_)
    : x(std::move(x_)), y(std::move(y_)), given(std::move(given_)) {
  if (x == y) throw Error("independence statement needs two distinct variables, got " + x + " twice");
  std::sort(given.begin(), given.end());
  given.erase(std::unique(given.begin(), given.end()), given.end());
  for (const auto& g : given)
    if (g == x || g == y) throw Error("conditioning set contains " + g + ", a queried variable");
}

std::string IndependenceStatement::to_string() const {
  std::string out = x + " _||_ " + y;
  if (!given.empty()) out += " | {" + join(given, ", ") + "}";
  return out;
}

// ------------------------------------------------------------- Operations

WorldTable enumerate_worlds(const Scm& scm) {
  const auto names = scm.names();
  const auto order = scm.dag().topological_order();
  std::vector<const Variable*> exo;
  std::vector<std::size_t> exo_idx;
  for (const auto& n : scm.exogenous()) {
    exo.push_back(&scm.variable(n));
    exo_idx.push_back(scm.dag().index_of(n));
  }
  std::vector<World> rows;
  World world(names.size());
  std::vector<Level> args;
  for_each_combination(exo, [&](std::span<const Level> combo) {
    for (std::size_t i = 0; i < combo.size(); ++i) world[exo_idx[i]] = combo[i];
    for (const auto& n : order) {
      const Mechanism* m = scm.mechanism(n);
      if (!m) continue;
      args.clear();
      for (const auto& p : m->parents()) args.push_back(world[scm.dag().index_of(p)]);
      world[scm.dag().index_of(n)] = m->evaluate(args);
    }
    rows.push_back(world);
  });
  return WorldTable(names, std::move(rows));
}

bool is_mechanism_consistent(const Scm& scm, const WorldTable& table) {
  std::vector<Level> args;
  for (const auto& w : table.rows()) {
    for (const auto& v : scm.variables())
      if (!v.has_level(table.value(w, v.name))) return false;
    for (const auto& m : scm.mechanisms()) {
      args.clear();
      for (const auto& p : m.parents()) args.push_back(table.value(w, p));
      if (m.evaluate(args) != table.value(w, m.child())) return false;
    }
  }
  return true;
}

bool d_separated(const CausalDag& dag, const IndependenceStatement& stmt) {
  const std::size_t n = dag.nodes().size();
  const std::size_t source = dag.index_of(stmt.x);
  const std::size_t target = dag.index_of(stmt.y);
  std::vector<bool> observed(n, false);
  for (const auto& g : stmt.given) observed[dag.index_of(g)] = true;

  // Nodes that are in the conditioning set or have a descendant there;
  // colliders among them pass the ball.
  std::vector<bool> opens_collider = observed;
  for (const auto& g : stmt.given)
    for (const auto& a : dag.ancestors(g)) opens_collider[dag.index_of(a)] = true;

  std::vector<std::vector<std::size_t>> parents(n), children(n);
  for (const auto& [p, c] : dag.edges()) {
    std::size_t pi = dag.index_of(p), ci = dag.index_of(c);
    parents[ci].push_back(pi);
    children[pi].push_back(ci);
  }

  // (node, arrived from a child) / (node, arrived from a parent)
  std::vector<std::array<bool, 2>> visited(n, {false, false});
  std::vector<std::pair<std::size_t, bool>> stack{{source, true}};
  while (!stack.empty()) {
    auto [node, from_child] = stack.back();
    stack.pop_back();
    if (visited[node][from_child ? 0 : 1]) continue;
    visited[node][from_child ? 0 : 1] = true;
    if (node == target && !observed[node]) return false;
    if (from_child) {
      if (observed[node]) continue;
      for (std::size_t p : parents[node]) stack.emplace_back(p, true);
      for (std::size_t c : children[node]) stack.emplace_back(c, false);
    } else {
      if (!observed[node])
        for (std::size_t c : children[node]) stack.emplace_back(c, false);
      if (opens_collider[node])
        for (std::size_t p : parents[node]) stack.emplace_back(p, true);
    }
  }
  return true;
}

bool weighted_independent(const std::vector<std::string>& columns, std::span<const World> rows,
                          std::span<const std::int64_t> weights,
                          const IndependenceStatement& stmt, std::vector<World>* strata) {
  auto index = [&](const std::string& name) {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw LookupError("unknown variable " + name);
    return static_cast<std::size_t>(it - columns.begin());
  };
  const std::size_t xi = index(stmt.x);
  const std::size_t yi = index(stmt.y);
  std::vector<std::size_t> zi;
  for (const auto& g : stmt.given) zi.push_back(index(g));

  struct Stratum {
    std::int64_t total = 0;
    std::map<Level, std::int64_t> x, y;
    std::map<std::pair<Level, Level>, std::int64_t> xy;
  };
  std::map<World, Stratum> by_stratum;
  bool any = false;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::int64_t w = weights[r];
    if (w <= 0) continue;
    any = true;
    World z;
    for (std::size_t i : zi) z.push_back(rows[r][i]);
    Stratum& s = by_stratum[z];
    s.total += w;
    s.x[rows[r][xi]] += w;
    s.y[rows[r][yi]] += w;
    s.xy[{rows[r][xi], rows[r][yi]}] += w;
  }
  if (!any) throw DegenerateDistributionError("independence test on an empty distribution");

  bool independent = true;
  for (const auto& [z, s] : by_stratum) {
    if (strata) strata->push_back(z);
    // P(x,y|z) = P(x|z) P(y|z)  <=>  n(x,y,z) n(z) = n(x,z) n(y,z)
    for (const auto& [xv, nx] : s.x) {
      for (const auto& [yv, ny] : s.y) {
        auto it = s.xy.find({xv, yv});
        const std::int64_t nxy = it == s.xy.end() ? 0 : it->second;
        if (nxy * s.total != nx * ny) independent = false;
      }
    }
  }
  return independent;
}

bool uniform_independent(const WorldTable& table, const IndependenceStatement& stmt) {
  if (table.empty())
    throw DegenerateDistributionError("independence test on an empty world table");
  std::vector<std::int64_t> ones(table.size(), 1);
  return weighted_independent(table.columns(), table.rows(), ones, stmt);
}

std::vector<IndependenceStatement> pairwise_statements(const std::vector<std::string>& names) {
  std::vector<IndependenceStatement> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      out.emplace_back(names[i], names[j]);
      for (std::size_t k = 0; k < names.size(); ++k)
        if (k != i && k != j) out.emplace_back(names[i], names[j], std::vector{names[k]});
    }
  }
  return out;
}

}  // namespace tele
