#ifndef TELE_TESTS_FIXTURES_HPP_
#define TELE_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "tele/intervention.hpp"
#include "tele/model.hpp"
#include "tele/teleology.hpp"

namespace tele::testing {

/// Heating room: W (weather), H (heating), T = W + H, B = H.
inline Scm heating_model() {
  const Variable w = Variable::range("W", 0, 1);
  const Variable h = Variable::range("H", 0, 1);
  const Variable t = Variable::range("T", 0, 2);
  const Variable b = Variable::range("B", 0, 1);
  return Scm({w, h, t, b}, {{"W", "T"}, {"H", "T"}, {"H", "B"}},
             {Mechanism::sum(t, {w, h}), Mechanism::sum(b, {h})});
}

inline MStarModel heating_star() { return do_surgery(heating_model(), {"H"}); }

inline FinalModel heating_final(const std::string& var, Comparison op, Level level) {
  return build_final_model(heating_star(), {var}, GoalPredicate({{var, op, level}}));
}

/// X -> Y -> Z with Y = X, Z = Y over {0, 1}.
inline Scm chain_model() {
  const Variable x = Variable::range("X", 0, 1);
  const Variable y = Variable::range("Y", 0, 1);
  const Variable z = Variable::range("Z", 0, 1);
  return Scm({x, y, z}, {{"X", "Y"}, {"Y", "Z"}}, {Mechanism::sum(y, {x}), Mechanism::sum(z, {y})});
}

/// A <- C -> B with A = C, B = C over {0, 1}.
inline Scm confounded_model() {
  const Variable a = Variable::range("A", 0, 1);
  const Variable b = Variable::range("B", 0, 1);
  const Variable c = Variable::range("C", 0, 1);
  return Scm({a, b, c}, {{"C", "A"}, {"C", "B"}}, {Mechanism::sum(a, {c}), Mechanism::sum(b, {c})});
}

inline std::vector<World> rows(std::initializer_list<World> worlds) { return worlds; }

}  // namespace tele::testing

#endif  // TELE_TESTS_FIXTURES_HPP_
