#include <gtest/gtest.h>

#include "kindmc/benchmarks.h"
#include "kindmc/oracle.h"
#include "kindmc/parser.h"
#include "kindmc/trace.h"
#include "support/corpus.h"

namespace kindmc {
namespace {

TEST(Oracle, ChainBugShortestTrace)
{
  auto r = bfs_check(generate_benchmark({BenchmarkFamily::ChainBug, 5}));
  ASSERT_TRUE(r.unsafe);
  ASSERT_EQ(r.shortest->length(), 6u);
  for (uint64_t i = 0; i < 6; ++i) {
    EXPECT_EQ(r.shortest->states[i].at("x"), i);
  }
  EXPECT_EQ(r.shortest->violated_prop, "no_hit");
  EXPECT_EQ(r.depth, 5u);
}

TEST(Oracle, SaturatingCounterExploresEightStates)
{
  auto r = bfs_check(testing::saturating_counter());
  EXPECT_FALSE(r.unsafe);
  EXPECT_EQ(r.explored, 8u);
  EXPECT_EQ(r.depth, 7u);
  EXPECT_TRUE(reachable(testing::saturating_counter(), State{{{"x", 7}}}));
  EXPECT_FALSE(reachable(testing::saturating_counter(), State{{{"x", 8}}}));
}

TEST(Oracle, CapError)
{
  auto wide = parse_system(
      "(system (var x (bv 22)) (init (= x 0)) (trans (= (next x) x)) (prop p true) (halt false))");
  EXPECT_THROW(bfs_check(wide), CapError);
  EXPECT_NO_THROW(bfs_check(wide, {22, 16}));
  EXPECT_THROW(bfs_check(generate_benchmark({BenchmarkFamily::DiamondParity, 5}), {20, 0}),
               CapError);
}

TEST(Oracle, ReachableStatesInBfsOrder)
{
  auto states = reachable_states(testing::halting_counter());
  ASSERT_EQ(states.size(), 8u);
  for (uint64_t i = 0; i < 8; ++i) {
    EXPECT_EQ(states[i].at("x"), i);
  }
}

TEST(Oracle, WitnessesReplayOnRandomSystems)
{
  int unsafe = 0;
  for (const auto &sys : testing::random_corpus(9001, 100)) {
    auto r = bfs_check(sys);
    if (!r.unsafe) {
      continue;
    }
    ++unsafe;
    ASSERT_TRUE(replay_trace(sys, *r.shortest));
    for (size_t i = 0; i + 1 < r.shortest->length(); ++i) {
      EXPECT_FALSE(first_violated_prop(sys, r.shortest->states[i]));
    }
  }
  EXPECT_GT(unsafe, 10);
}

}  // namespace
}  // namespace kindmc
