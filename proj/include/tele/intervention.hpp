#ifndef TELE_INTERVENTION_HPP_
#define TELE_INTERVENTION_HPP_

#include <cstdint>
#include <map>
#include <string>

#include <boost/rational.hpp>

#include "tele/model.hpp"

namespace tele {

using Probability = boost::rational<std::int64_t>;
using Distribution = std::map<Level, Probability>;

struct InterventionSpec {
  std::string target;
};

/// A model after surgery on exactly one variable: the target keeps its node
/// and domain but loses its inbound arrows and its mechanism. There is no
/// way to intervene again on an MStarModel; derived models always start
/// from the base Scm.
class MStarModel {
 public:
  const Scm& base() const { return base_; }
  const std::string& target() const { return target_; }
  /// The base model with the target freed.
  const Scm& surgered() const { return surgered_; }
  const CausalDag& surgered_dag() const { return surgered_.dag(); }

  friend bool operator==(const MStarModel&, const MStarModel&) = default;

 private:
  friend MStarModel do_surgery(const Scm& scm, const InterventionSpec& spec);
  MStarModel(Scm base, std::string target, Scm surgered)
      : base_(std::move(base)), target_(std::move(target)), surgered_(std::move(surgered)) {}

  Scm base_;
  std::string target_;
  Scm surgered_;
};

/// Throws LookupError for an unknown target.
MStarModel do_surgery(const Scm& scm, const InterventionSpec& spec);

/// Worlds of the surgered model; the target ranges over its whole domain.
WorldTable enumerate_worlds_star(const MStarModel& m);

/// Uniform distribution of `query` over the worlds of `m` where the target
/// equals `target_value`.
Distribution interventional_distribution(const MStarModel& m, Level target_value,
                                         const std::string& query);

/// Observational counterpart: distribution of `query` over the worlds of
/// `table` where `given` equals `value`. Throws DegenerateDistributionError
/// if no world matches.
Distribution conditional_distribution(const WorldTable& table, const std::string& given,
                                      Level value, const std::string& query);

}  // namespace tele

#endif  // TELE_INTERVENTION_HPP_
