#include <gtest/gtest.h>

#include <random>

#include "kindmc/benchmarks.h"
#include "kindmc/trace.h"

namespace kindmc {
namespace {

Trace counter_trace(std::vector<uint64_t> xs, bool violated)
{
  Trace t;
  for (auto x : xs) {
    t.states.push_back(State{{{"x", x}}});
  }
  t.inputs.resize(xs.size() - 1);
  if (violated) {
    t.violated_prop = "no_hit";
  }
  return t;
}

class Replay : public ::testing::Test
{
 protected:
  TransitionSystem sys = generate_benchmark({BenchmarkFamily::ChainBug, 5});
};

TEST_F(Replay, FullWitnessIsValid)
{
  EXPECT_TRUE(replay_trace(sys, counter_trace({0, 1, 2, 3, 4, 5}, true)));
}

TEST_F(Replay, BadStepIsReported)
{
  auto v = replay_trace(sys, counter_trace({0, 2}, false));
  EXPECT_FALSE(v);
  EXPECT_EQ(v.clause, "trans");
  EXPECT_EQ(v.index, 0u);
}

TEST_F(Replay, BadInitIsReported)
{
  auto v = replay_trace(sys, counter_trace({1}, false));
  EXPECT_FALSE(v);
  EXPECT_EQ(v.clause, "init");
  EXPECT_TRUE(replay_trace(sys, counter_trace({1}, false), {.check_init = false}));
}

TEST_F(Replay, PropertyMustFailAtTheEnd)
{
  auto v = replay_trace(sys, counter_trace({0, 1, 2}, true));
  EXPECT_FALSE(v);
  EXPECT_EQ(v.clause, "prop");
}

TEST_F(Replay, MalformedTracesAreInvalidNotThrown)
{
  Trace empty;
  EXPECT_EQ(replay_trace(sys, empty).clause, "structure");
  Trace wrong_inputs = counter_trace({0, 1}, false);
  wrong_inputs.inputs.clear();
  EXPECT_EQ(replay_trace(sys, wrong_inputs).clause, "structure");
  Trace unknown_var{{State{{{"y", 0}}}}, {}, std::nullopt};
  EXPECT_EQ(replay_trace(sys, unknown_var).clause, "structure");
  Trace too_wide = counter_trace({9}, false);
  EXPECT_FALSE(replay_trace(sys, too_wide));
}

TEST(StatesEqual, Examples)
{
  EXPECT_TRUE(states_equal(State{{{"x", 5}}}, State{{{"x", 5}}}));
  EXPECT_FALSE(states_equal(State{{{"x", 5}}}, State{{{"x", 4}}}));
  EXPECT_FALSE(states_equal(State{{{"x", 5}, {"b", 1}}}, State{{{"x", 5}, {"b", 0}}}));
  EXPECT_THROW(states_equal(State{{{"x", 5}}}, State{{{"y", 5}}}), InternalError);
  EXPECT_THROW(states_equal(State{{{"x", 5}}}, State{{{"x", 5}, {"b", 1}}}), InternalError);
}

TEST(StatesEqual, IsAnEquivalenceRelation)
{
  std::mt19937_64 rng(99);
  auto draw = [&] {
    // tiny domain so that equal states actually occur
    return State{{{"a", rng() % 3}, {"b", rng() % 2}}};
  };
  for (int i = 0; i < 3000; ++i) {
    State a = draw(), b = draw(), c = draw();
    EXPECT_TRUE(states_equal(a, a));
    EXPECT_EQ(states_equal(a, b), states_equal(b, a));
    if (states_equal(a, b) && states_equal(b, c)) {
      EXPECT_TRUE(states_equal(a, c));
    }
    EXPECT_EQ(states_equal(a, b), a == b);
  }
}

TEST(FirstViolatedProp, DeclarationOrder)
{
  TransitionSystem sys = generate_benchmark({BenchmarkFamily::ChainBug, 5});
  EXPECT_EQ(first_violated_prop(sys, State{{{"x", 5}}}), "no_hit");
  EXPECT_FALSE(first_violated_prop(sys, State{{{"x", 4}}}));
}

}  // namespace
}  // namespace kindmc
