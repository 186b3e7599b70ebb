#ifndef TELE_TELEOLOGY_HPP_
#define TELE_TELEOLOGY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tele/intervention.hpp"
#include "tele/model.hpp"

namespace tele {

enum class Comparison { equal, less, greater, less_equal, greater_equal, not_equal };

/// "=", "<", ">", "<=", ">=", "!=".
std::string_view comparison_symbol(Comparison op);

struct GoalAtom {
  std::string variable;
  Comparison op = Comparison::equal;
  Level level = 0;

  bool holds(Level value) const;
  /// e.g. "T = 1"
  std::string to_string() const;

  friend bool operator==(const GoalAtom&, const GoalAtom&) = default;
};

/// Conjunction of atomic comparisons.
class GoalPredicate {
 public:
  /// Throws Error for an empty conjunction.
  explicit GoalPredicate(std::vector<GoalAtom> conjuncts);

  const std::vector<GoalAtom>& conjuncts() const { return conjuncts_; }
  /// Referenced variables, first-mention order, no repeats.
  std::vector<std::string> variables() const;
  bool holds(const WorldTable& table, const World& world) const;
  /// Atoms joined with " & ".
  std::string to_string() const;

  friend bool operator==(const GoalPredicate&, const GoalPredicate&) = default;

 private:
  std::vector<GoalAtom> conjuncts_;
};

/// Every referenced variable exists and some combination of domain levels
/// satisfies the conjunction. Throws LookupError / TeleologicalValidityError.
void validate_goal(const GoalPredicate& goal, const Scm& scm);

/// An M*-model plus intended effects and a goal. The final DAG is the
/// surgered DAG with every arrow from the action to an intended effect
/// turned around; intended effects that are not children of the action get
/// a direct arrow into it.
class FinalModel {
 public:
  const MStarModel& mstar() const { return mstar_; }
  const std::string& action() const { return mstar_.target(); }
  /// Declaration order.
  const std::vector<std::string>& intended_effects() const { return intended_; }
  const GoalPredicate& goal() const { return goal_; }
  const CausalDag& final_dag() const { return final_dag_; }

 private:
  friend FinalModel build_final_model(const MStarModel&, std::vector<std::string>, GoalPredicate);
  FinalModel(MStarModel mstar, std::vector<std::string> intended, GoalPredicate goal,
             CausalDag final_dag)
      : mstar_(std::move(mstar)),
        intended_(std::move(intended)),
        goal_(std::move(goal)),
        final_dag_(std::move(final_dag)) {}

  MStarModel mstar_;
  std::vector<std::string> intended_;
  GoalPredicate goal_;
  CausalDag final_dag_;
};

/// Throws TeleologicalValidityError when an intended effect is not a
/// descendant of the action in the base model or the goal mentions a
/// non-intended variable; StructuralError when the final DAG has a cycle.
FinalModel build_final_model(const MStarModel& m, std::vector<std::string> intended,
                             GoalPredicate goal);

/// M* worlds in which the goal holds. Empty when the goal is unreachable.
WorldTable compatible_worlds(const FinalModel& f);

struct DependenceVerdict {
  IndependenceStatement statement;
  /// d-separation on the final DAG.
  bool graph_separated = false;
  /// Exact verdict under the uniform distribution over the compatible
  /// worlds; empty when the goal is unreachable.
  std::optional<bool> independent;
};

/// Every pair of variables, unconditioned and with each singleton
/// conditioning set.
std::vector<DependenceVerdict> implied_dependencies(const FinalModel& f);

struct Distinction {
  bool distinguishable = false;
  std::vector<std::string> columns;
  std::vector<World> only_first;
  std::vector<World> only_second;
};

/// Throws ComparisonError when the models sit on different M*-models.
Distinction distinguishable(const FinalModel& first, const FinalModel& second);

struct GoalCandidate {
  std::vector<std::string> effects;
  GoalAtom goal;
  WorldTable compatible;
  /// False when reversing arrows for `effects` creates a cycle; such a
  /// candidate has worlds but no final model.
  bool buildable = true;

  /// "{T,B}:T=1"
  std::string label() const;
};

inline constexpr std::size_t kDefaultCandidateCap = 4096;

/// Every non-empty subset (size <= max_effects) of the action's descendants
/// crossed with every equality goal over a member of the subset. Subsets
/// are ordered by size, then by declaration order. Throws BudgetError when
/// the count exceeds `cap`.
std::vector<GoalCandidate> enumerate_goal_hypotheses(const MStarModel& m,
                                                     std::size_t max_effects,
                                                     std::size_t cap = kDefaultCandidateCap);

}  // namespace tele

#endif  // TELE_TELEOLOGY_HPP_
