#ifndef TELE_MODEL_HPP_
#define TELE_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tele {

using Level = int;

/// A named discrete variable. Levels are strictly increasing.
struct Variable {
  std::string name;
  std::vector<Level> domain;

  /// Levels lo, lo+1, ..., hi.
  static Variable range(std::string name, Level lo, Level hi);

  bool has_level(Level level) const;
  Level min_level() const { return domain.front(); }

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Throws StructuralError if the name is empty or the domain has fewer than
/// two levels, duplicates, or is not strictly increasing.
void validate_variable(const Variable& variable);

/// Directed acyclic graph over named nodes. Node order is declaration order
/// and every listing (parents, children, descendants, ...) follows it.
class CausalDag {
 public:
  using Edge = std::pair<std::string, std::string>;

  /// Throws StructuralError on duplicate nodes, unknown endpoints, self
  /// loops, duplicate edges or cycles.
  CausalDag(std::vector<std::string> nodes, std::vector<Edge> edges);

  const std::vector<std::string>& nodes() const { return nodes_; }
  /// Sorted by (parent position, child position).
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_node(std::string_view name) const;
  bool has_edge(std::string_view parent, std::string_view child) const;
  /// Throws LookupError for unknown names.
  std::size_t index_of(std::string_view name) const;

  std::vector<std::string> parents(std::string_view name) const;
  std::vector<std::string> children(std::string_view name) const;
  std::vector<std::string> descendants(std::string_view name) const;
  std::vector<std::string> ancestors(std::string_view name) const;
  std::vector<std::string> topological_order() const;

  /// The same graph with every edge into `name` removed.
  CausalDag without_inbound(std::string_view name) const;

  friend bool operator==(const CausalDag& a, const CausalDag& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::size_t> reach(std::size_t start, bool downward) const;

  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

/// Deterministic lookup table from parent levels to a child level.
class Mechanism {
 public:
  using Table = std::map<std::vector<Level>, Level>;

  Mechanism(std::string child, std::vector<std::string> parents, Table table);

  /// Tabulates `fn` over every combination of parent levels. Throws
  /// StructuralError if `fn` leaves the child's domain.
  static Mechanism tabulate(const Variable& child,
                            const std::vector<Variable>& parents,
                            const std::function<Level(std::span<const Level>)>& fn);

  /// child = sum of its parents. Out-of-domain sums are an error; no
  /// clamping.
  static Mechanism sum(const Variable& child, const std::vector<Variable>& parents);

  const std::string& child() const { return child_; }
  const std::vector<std::string>& parents() const { return parents_; }
  const Table& table() const { return table_; }

  /// Throws StructuralError when the combination is not in the table.
  Level evaluate(std::span<const Level> parent_levels) const;

  friend bool operator==(const Mechanism&, const Mechanism&) = default;

 private:
  std::string child_;
  std::vector<std::string> parents_;
  Table table_;
};

/// Calls `visit` on every combination of levels (last position fastest).
void for_each_combination(const std::vector<const Variable*>& variables,
                          const std::function<void(std::span<const Level>)>& visit);

/// Structural causal model with deterministic mechanisms. Variables keep
/// their declaration order.
class Scm {
 public:
  /// Validates every invariant; throws StructuralError naming the node.
  Scm(std::vector<Variable> variables, std::vector<CausalDag::Edge> edges,
      std::vector<Mechanism> mechanisms);

  const std::vector<Variable>& variables() const { return variables_; }
  std::vector<std::string> names() const { return dag_.nodes(); }
  const Variable& variable(std::string_view name) const;
  const CausalDag& dag() const { return dag_; }
  /// Declaration order of child.
  const std::vector<Mechanism>& mechanisms() const { return mechanisms_; }
  /// nullptr for exogenous variables.
  const Mechanism* mechanism(std::string_view name) const;
  std::vector<std::string> exogenous() const;

  friend bool operator==(const Scm& a, const Scm& b) {
    return a.variables_ == b.variables_ && a.dag_ == b.dag_ &&
           a.mechanisms_ == b.mechanisms_;
  }

 private:
  std::vector<Variable> variables_;
  CausalDag dag_;
  std::vector<Mechanism> mechanisms_;
  std::vector<std::optional<std::size_t>> mechanism_of_;
};

/// One level per column of the owning table.
using World = std::vector<Level>;

/// Deduplicated worlds, sorted lexicographically in column order. Each
/// member carries the same weight.
class WorldTable {
 public:
  WorldTable() = default;
  WorldTable(std::vector<std::string> columns, std::vector<World> rows);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<World>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  bool has_column(std::string_view name) const;
  /// Throws LookupError.
  std::size_t column_index(std::string_view name) const;
  bool contains(const World& world) const;
  Level value(const World& world, std::string_view column) const {
    return world[column_index(column)];
  }

  WorldTable filter(const std::function<bool(const World&)>& keep) const;
  /// Columns in the given order; duplicate projected rows collapse.
  WorldTable project(const std::vector<std::string>& columns) const;

  friend bool operator==(const WorldTable&, const WorldTable&) = default;

 private:
  std::vector<std::string> columns_;
  std::vector<World> rows_;
};

/// x is independent of y given `given`. Throws Error when x == y or either
/// appears in `given`. `given` is kept sorted.
struct IndependenceStatement {
  IndependenceStatement(std::string x, std::string y, std::vector<std::string> given = {});

  std::string x;
  std::string y;
  std::vector<std::string> given;

  std::string to_string() const;

  friend bool operator==(const IndependenceStatement&,
                         const IndependenceStatement&) = default;
};

/// Every world consistent with the model: exogenous variables range over
/// their domains, the rest follow their mechanisms.
WorldTable enumerate_worlds(const Scm& scm);

/// Re-evaluates each mechanism on each world.
bool is_mechanism_consistent(const Scm& scm, const WorldTable& table);

/// Graphical separation by the chain/fork/collider blocking rules.
bool d_separated(const CausalDag& dag, const IndependenceStatement& stmt);

/// Exact factorization test under the uniform distribution over `table`.
/// Throws DegenerateDistributionError for an empty table.
bool uniform_independent(const WorldTable& table, const IndependenceStatement& stmt);

/// Weighted variant of the factorization test. Rows with weight zero are
/// ignored. `strata` receives the conditioning strata that were tested.
bool weighted_independent(const std::vector<std::string>& columns,
                          std::span<const World> rows,
                          std::span<const std::int64_t> weights,
                          const IndependenceStatement& stmt,
                          std::vector<World>* strata = nullptr);

/// Every statement over `names` with an empty or singleton conditioning set,
/// pairs in declaration order.
std::vector<IndependenceStatement> pairwise_statements(const std::vector<std::string>& names);

}  // namespace tele

#endif  // TELE_MODEL_HPP_
