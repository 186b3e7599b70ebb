#include "tele/intervention.hpp"

#include "tele/errors.hpp"

namespace tele {

MStarModel do_surgery(const Scm& scm, const InterventionSpec& spec) {
  if (!scm.dag().has_node(spec.target))
    throw LookupError("cannot intervene on unknown variable " + spec.target);
  std::vector<CausalDag::Edge> edges;
  for (const auto& e : scm.dag().edges())
    if (e.second != spec.target) edges.push_back(e);
  std::vector<Mechanism> mechanisms;
  for (const auto& m : scm.mechanisms())
    if (m.child() != spec.target) mechanisms.push_back(m);
  Scm surgered(scm.variables(), std::move(edges), std::move(mechanisms));
  return MStarModel(scm, spec.target, std::move(surgered));
}

WorldTable enumerate_worlds_star(const MStarModel& m) { return enumerate_worlds(m.surgered()); }

Distribution conditional_distribution(const WorldTable& table, const std::string& given,
                                      Level value, const std::string& query) {
  const std::size_t gi = table.column_index(given);
  const std::size_t qi = table.column_index(query);
  std::map<Level, std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& w : table.rows()) {
    if (w[gi] != value) continue;
    ++counts[w[qi]];
    ++total;
  }
  if (total == 0)
    throw DegenerateDistributionError("no world has " + given + " = " + std::to_string(value));
  Distribution out;
  for (const auto& [level, n] : counts) out.emplace(level, Probability(n, total));
  return out;
}

Distribution interventional_distribution(const MStarModel& m, Level target_value,
                                         const std::string& query) {
  if (!m.base().variable(m.target()).has_level(target_value))
    throw DomainError("level " + std::to_string(target_value) + " is outside the domain of " +
                      m.target());
  m.base().variable(query);
  return conditional_distribution(enumerate_worlds_star(m), m.target(), target_value, query);
}

}  // namespace tele
