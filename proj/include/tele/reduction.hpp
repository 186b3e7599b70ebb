#ifndef TELE_REDUCTION_HPP_
#define TELE_REDUCTION_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tele/model.hpp"
#include "tele/teleology.hpp"

namespace tele {

/// How many action levels reach the goal, taken over all contexts.
enum class Achievability {
  unique,       // exactly one level in every context
  multiple,     // some context has several
  unreachable,  // some context has none
};

/// A purely causal stand-in for a final model. The action listens to a
/// binary intention I, which listens to pre-action copies of the goal
/// variables; the goal variables are measured again after the action.
///
/// Variable order: context, pre-state copies, I, action, post-state copies,
/// remaining effects of the action.
struct ReductionModel {
  Scm scm;
  Scm base;
  /// Reduction variable -> original variable. I maps to itself.
  std::map<std::string, std::string> provenance;

  std::vector<std::string> context;
  std::vector<std::string> pre_state;
  std::string intention;
  std::string action;
  std::vector<std::string> post_state;
  std::vector<std::string> downstream;

  Level rest_level = 0;
  /// Action level taken when I = 1.
  Level chosen_level = 0;
  Achievability achievability = Achievability::unique;
};

/// `rest` defaults to the smallest level of the action. Throws DomainError
/// for a rest level outside the domain, ReductionError when the goal is
/// reachable in no context or when the intention (or the level it picks)
/// is not a function of the pre-state.
ReductionModel build_reduction(const FinalModel& f, std::optional<Level> rest = std::nullopt);

/// The reduction with I spliced out: the action listens to the pre-state
/// copies directly.
Scm erase_intention(const ReductionModel& r);

/// Reduction graph with I and the pre-state copies spliced out and the
/// post-state copies renamed back; nodes in base declaration order.
CausalDag projected_dag(const ReductionModel& r);

/// Reduction worlds restricted to context, action, post-state and
/// downstream variables, renamed and ordered like the base model.
WorldTable projected_worlds(const ReductionModel& r);

enum class ProjectionRelation { equal, subset, differs };

struct StatementDisagreement {
  IndependenceStatement statement;
  bool separated_in_final = false;
  bool separated_in_reduction = false;
};

struct StructureReport {
  std::vector<CausalDag::Edge> edges_only_in_final;
  std::vector<CausalDag::Edge> edges_only_in_reduction;

  std::vector<std::string> action_parents_final;
  std::vector<std::string> action_parents_reduction;
  /// What the action actually listens to: empty for a final model whose
  /// goal removes no world, and for a reduction whose intention is
  /// constant.
  std::vector<std::string> effective_parents_final;
  std::vector<std::string> effective_parents_reduction;
  bool wiring_differs = false;

  std::vector<StatementDisagreement> disagreements;

  ProjectionRelation projection = ProjectionRelation::equal;
  Achievability achievability = Achievability::unique;
};

/// Throws ComparisonError when `r` was not built from `f`'s base model.
StructureReport compare_structures(const FinalModel& f, const ReductionModel& r);

std::string_view to_string(Achievability a);
std::string_view to_string(ProjectionRelation p);

}  // namespace tele

#endif  // TELE_REDUCTION_HPP_
