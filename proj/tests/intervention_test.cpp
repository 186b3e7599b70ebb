#include "tele/intervention.hpp"

#include <random>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "tele/errors.hpp"

namespace tele {
namespace {

using testing::chain_model;
using testing::heating_model;

TEST(DoSurgery, HeatingActionIsAlreadyExogenous) {
  const MStarModel m = do_surgery(heating_model(), {"H"});
  EXPECT_TRUE(m.surgered_dag().parents("H").empty());
  EXPECT_EQ(m.surgered_dag(), heating_model().dag());
  EXPECT_EQ(m.surgered_dag().nodes(), heating_model().dag().nodes());
}

TEST(DoSurgery, ChainLosesOnlyTheInboundArrow) {
  const MStarModel m = do_surgery(chain_model(), {"Y"});
  EXPECT_EQ(m.surgered_dag().edges(), (std::vector<CausalDag::Edge>{{"Y", "Z"}}));
  EXPECT_EQ(m.surgered().variable("X"), chain_model().variable("X"));
  EXPECT_EQ(m.surgered().mechanism("Y"), nullptr);
  EXPECT_EQ(*m.surgered().mechanism("Z"), *chain_model().mechanism("Z"));
}

TEST(DoSurgery, UnknownTarget) {
  EXPECT_THROW(do_surgery(heating_model(), {"Q"}), LookupError);
}

TEST(EnumerateWorldsStar, HeatingMatchesBaseTable) {
  EXPECT_EQ(enumerate_worlds_star(do_surgery(heating_model(), {"H"})), enumerate_worlds(heating_model()));
}

TEST(EnumerateWorldsStar, ChainWithFreedMiddle) {
  const auto t = enumerate_worlds_star(do_surgery(chain_model(), {"Y"}));
  EXPECT_EQ(t.rows(), (std::vector<World>{{0, 0, 0}, {0, 1, 1}, {1, 0, 0}, {1, 1, 1}}));
}

TEST(InterventionalDistribution, HeatingOnGivesWarmOrHot) {
  const auto m = do_surgery(heating_model(), {"H"});
  EXPECT_EQ(interventional_distribution(m, 1, "T"), (Distribution{{1, Probability(1, 2)}, {2, Probability(1, 2)}}));
  EXPECT_EQ(interventional_distribution(m, 0, "B"), (Distribution{{0, Probability(1)}}));
  EXPECT_EQ(interventional_distribution(m, 1, "H"), (Distribution{{1, Probability(1)}}));
}

TEST(InterventionalDistribution, Errors) {
  const auto m = do_surgery(heating_model(), {"H"});
  EXPECT_THROW(interventional_distribution(m, 4, "T"), DomainError);
  EXPECT_THROW(interventional_distribution(m, 1, "Q"), LookupError);
}

TEST(InterventionalDistribution, SeeDiffersFromDo) {
  // A <- C -> B: seeing A = 1 tells us C = 1 and so B = 1; setting A tells
  // us nothing about B.
  const Scm scm = testing::confounded_model();
  const Distribution seen = conditional_distribution(enumerate_worlds(scm), "A", 1, "B");
  const Distribution done = interventional_distribution(do_surgery(scm, {"A"}), 1, "B");
  EXPECT_EQ(seen, (Distribution{{1, Probability(1)}}));
  EXPECT_EQ(done, (Distribution{{0, Probability(1, 2)}, {1, Probability(1, 2)}}));
  EXPECT_NE(seen, done);
}

TEST(SurgeryProperties, NodesPreservedEdgesShrinkExactly) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const Scm scm = testing::random_scm(rng);
    const auto names = scm.names();
    const std::string target = names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)];
    const MStarModel m = do_surgery(scm, {target});
    ASSERT_EQ(m.surgered_dag().nodes(), scm.dag().nodes());
    std::vector<CausalDag::Edge> expected;
    for (const auto& e : scm.dag().edges())
      if (e.second != target) expected.push_back(e);
    ASSERT_EQ(m.surgered_dag().edges(), expected);
    ASSERT_TRUE(m.surgered_dag().parents(target).empty());

    const WorldTable star = enumerate_worlds_star(m);
    std::size_t count = 1;
    for (const auto& n : m.surgered().exogenous()) count *= scm.variable(n).domain.size();
    ASSERT_EQ(star.size(), count);
    if (scm.mechanism(target) == nullptr) {
      ASSERT_EQ(star, enumerate_worlds(scm));
    }
  }
}

}  // namespace
}  // namespace tele
