#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "kindmc/benchmarks.h"
#include "kindmc/encoder.h"
#include "kindmc/oracle.h"
#include "kindmc/parser.h"
#include "kindmc/solver.h"
#include "kindmc/trace.h"
#include "support/corpus.h"

namespace kindmc {
namespace {

SolverVerdict solve(const Query &q) { return check(q, SolverConfig{}); }

bool sat(const Query &q)
{
  auto v = solve(q);
  EXPECT_NE(v.status, SolverStatus::Unknown);
  return v.status == SolverStatus::Sat;
}

std::vector<uint64_t> xs(const Trace &t)
{
  std::vector<uint64_t> out;
  for (const auto &s : t.states) {
    out.push_back(s.at("x"));
  }
  return out;
}

TransitionSystem chain5() { return generate_benchmark({BenchmarkFamily::ChainBug, 5}); }

TEST(TimedVar, Naming)
{
  EXPECT_EQ((TimedVar{"x", 3, Sort::bitvec(2)}).name(), "x@3");
  auto e = timed(mk_eq(mk_next("x", Sort::bitvec(2)), mk_var("x", Sort::bitvec(2))), 4);
  EXPECT_EQ(to_smtlib(e), "(= x@5 x@4)");
}

TEST(BaseCase, ChainBugDepths)
{
  TransitionSystem sys = chain5();
  EXPECT_FALSE(sat(encode_base_case(sys, 5)));
  Query q = encode_base_case(sys, 6);
  auto v = solve(q);
  ASSERT_EQ(v.status, SolverStatus::Sat);
  auto d = decode_model(sys, q, v.model);
  EXPECT_EQ(xs(d.trace), (std::vector<uint64_t>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(d.trace.violated_prop, "no_hit");
  EXPECT_TRUE(replay_trace(sys, d.trace));
}

TEST(BaseCase, InitialViolation)
{
  TransitionSystem sys = parse_system(
      "(system (var x (bv 3)) (init (= x 5)) (trans (= (next x) x))"
      " (prop p (not (= x 5))) (halt false))");
  Query q = encode_base_case(sys, 1);
  auto v = solve(q);
  ASSERT_EQ(v.status, SolverStatus::Sat);
  auto d = decode_model(sys, q, v.model);
  EXPECT_EQ(d.depth, 1u);
  EXPECT_EQ(xs(d.trace), (std::vector<uint64_t>{5}));
}

TEST(BaseCase, SafeAccumulatorUnsatUpToTwelve)
{
  TransitionSystem sys = generate_benchmark({BenchmarkFamily::Accumulator, 4, false});
  for (unsigned k = 1; k <= 12; ++k) {
    EXPECT_FALSE(sat(encode_base_case(sys, k))) << "k=" << k;
  }
}

TEST(ForwardCondition, HaltingCounter)
{
  TransitionSystem sys = testing::halting_counter();
  EXPECT_FALSE(sat(encode_forward_condition(sys, 8)));
  Query q = encode_forward_condition(sys, 3);
  auto v = solve(q);
  ASSERT_EQ(v.status, SolverStatus::Sat);
  EXPECT_EQ(xs(decode_model(sys, q, v.model).trace), (std::vector<uint64_t>{0, 1, 2}));
  for (unsigned k = 1; k <= 7; ++k) {
    EXPECT_TRUE(sat(encode_forward_condition(sys, k))) << k;
  }
}

TEST(ForwardCondition, HaltFalseAlwaysSat)
{
  TransitionSystem sys = chain5();
  for (unsigned k = 1; k <= 10; ++k) {
    EXPECT_TRUE(sat(encode_forward_condition(sys, k))) << k;
  }
}

TEST(InductiveStep, SaturatingCounter)
{
  TransitionSystem sys = testing::saturating_counter();
  EXPECT_FALSE(sat(encode_inductive_step(sys, 2)));
  Query q = encode_inductive_step(sys, 1);
  auto v = solve(q);
  ASSERT_EQ(v.status, SolverStatus::Sat);
  auto t = decode_model(sys, q, v.model).trace;
  ASSERT_EQ(t.length(), 1u);
  EXPECT_GT(t.states[0].at("x"), 7u);
}

TEST(InductiveStep, ChainBugSuffix)
{
  TransitionSystem sys = chain5();
  Query q = encode_inductive_step(sys, 2);
  auto v = solve(q);
  ASSERT_EQ(v.status, SolverStatus::Sat);
  auto d = decode_model(sys, q, v.model);
  EXPECT_EQ(xs(d.trace), (std::vector<uint64_t>{4, 5}));
  EXPECT_EQ(d.trace.violated_prop, "no_hit");
  EXPECT_TRUE(replay_trace(sys, d.trace, {.check_init = false}));
}

Target chain_target()
{
  Target t;
  t.id = 0;
  t.first_state = State{{{"x", 3}}};
  t.suffix.states = {State{{{"x", 3}}}, State{{{"x", 4}}}, State{{{"x", 5}}}};
  t.suffix.inputs.resize(2);
  t.suffix.violated_prop = "no_hit";
  return t;
}

TEST(ExtendedBaseCase, TargetMatchAtDepthFour)
{
  TransitionSystem sys = chain5();
  const Target targets[] = {chain_target()};
  EXPECT_FALSE(sat(encode_extended_base_case(sys, 3, targets)));
  Query q = encode_extended_base_case(sys, 4, targets);
  auto v = solve(q);
  ASSERT_EQ(v.status, SolverStatus::Sat);
  auto d = decode_model(sys, q, v.model);
  EXPECT_EQ(d.depth, 4u);
  EXPECT_EQ(d.target_id, 0);
  EXPECT_EQ(xs(d.trace), (std::vector<uint64_t>{0, 1, 2, 3}));
  EXPECT_TRUE(states_equal(d.trace.states.back(), targets[0].first_state));
}

TEST(ExtendedBaseCase, EmptyTargetsMatchPlainBaseCase)
{
  for (const auto &sys : testing::random_corpus(77, 60, {8, 2})) {
    for (unsigned k = 1; k <= 6; ++k) {
      ASSERT_EQ(sat(encode_base_case(sys, k)), sat(encode_extended_base_case(sys, k, {})))
          << print_system(sys) << " k=" << k;
    }
  }
}

TEST(ExtendedBaseCase, UnreachableTargetNeverMatches)
{
  TransitionSystem sys = testing::identity_system();
  Target t;
  t.first_state = State{{{"x", 1}}};
  t.suffix.states = {t.first_state};
  const Target targets[] = {t};
  for (unsigned k = 1; k <= 10; ++k) {
    EXPECT_FALSE(sat(encode_extended_base_case(sys, k, targets, true))) << k;
  }
}

TEST(Serialize, GoldenChainBugBaseCase)
{
  std::ifstream in(std::string(KINDMC_TESTDATA_DIR) + "/chain5_base1.smt2");
  ASSERT_TRUE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(serialize_smtlib(encode_base_case(chain5(), 1)), golden.str());
}

TEST(Serialize, DeterministicAndOrdered)
{
  Query q = encode_extended_base_case(chain5(), 4, std::vector<Target>{chain_target()});
  const std::string a = serialize_smtlib(q);
  EXPECT_EQ(a, serialize_smtlib(q));
  EXPECT_EQ(a, serialize_smtlib(encode_extended_base_case(chain5(), 4,
                                                           std::vector<Target>{chain_target()})));
  const auto logic = a.find("(set-logic QF_BV)");
  const auto decl = a.find("(declare-const x@1");
  const auto marker = a.find("(declare-const $tgt");
  const auto check = a.find("(check-sat)");
  const auto get = a.find("(get-value");
  ASSERT_NE(marker, std::string::npos);
  EXPECT_LT(logic, decl);
  EXPECT_LT(decl, marker);
  EXPECT_LT(marker, check);
  EXPECT_LT(check, get);
  EXPECT_EQ(serialize_smtlib_check(q), a.substr(0, check + std::string("(check-sat)\n").size()));
}

TEST(Serialize, BoolOnlySystemDeclaresBools)
{
  TransitionSystem sys = parse_system(
      "(system (var a bool) (var b bool) (input i bool) (init (not a))"
      " (trans (and (= (next a) (or a i)) (= (next b) a))) (prop p (not (and a b))) (halt false))");
  const std::string doc = serialize_smtlib(encode_base_case(sys, 3));
  std::istringstream lines(doc);
  std::string line;
  int decls = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("(declare-const", 0) == 0) {
      ++decls;
      EXPECT_NE(line.find(" Bool)"), std::string::npos) << line;
    }
  }
  EXPECT_EQ(decls, 2 * 3 + 2 + 3);
}

TEST(Query, DeclarationsAreStepMajor)
{
  TransitionSystem sys = parse_system(
      "(system (var x (bv 2)) (input i bool) (init (= x 0))"
      " (trans (= (next x) (ite i (bvadd x 1) x))) (prop p true) (halt false))");
  Query q = encode_base_case(sys, 3);
  std::vector<std::string> names;
  for (const auto &d : q.decls) {
    names.push_back(d.name());
  }
  EXPECT_EQ(names, (std::vector<std::string>{"x@1", "i@1", "x@2", "i@2", "x@3"}));
  EXPECT_EQ(q.markers.size(), 3u);
  EXPECT_NE(q.find_decl("i@2"), nullptr);
  EXPECT_EQ(q.find_decl("i@3"), nullptr);
}

TEST(Encoding, BaseCaseMatchesOracleOnRandomSystems)
{
  for (const auto &sys : testing::random_corpus(2024, 80, {10, 2})) {
    auto r = bfs_check(sys);
    for (unsigned k = 1; k <= 8; ++k) {
      const bool want = r.unsafe && r.shortest->length() <= k;
      ASSERT_EQ(sat(encode_base_case(sys, k)), want) << print_system(sys) << " k=" << k;
    }
  }
}

TEST(Encoding, Monotonicity)
{
  std::vector<TransitionSystem> systems = {testing::halting_counter(), chain5()};
  for (uint64_t d : {2, 5}) {
    systems.push_back(generate_benchmark({BenchmarkFamily::DiamondParity, d}));
    systems.push_back(generate_benchmark({BenchmarkFamily::ConstCheck, d}));
    systems.push_back(generate_benchmark({BenchmarkFamily::Accumulator, d}));
  }
  for (const auto &sys : systems) {
    bool base = false, fwd_unsat = false;
    for (unsigned k = 1; k <= 10; ++k) {
      const bool b = sat(encode_base_case(sys, k));
      const bool f = !sat(encode_forward_condition(sys, k));
      if (base) {
        EXPECT_TRUE(b);
      }
      if (fwd_unsat) {
        EXPECT_TRUE(f);
      }
      base = b;
      fwd_unsat = f;
    }
  }
}

TEST(HaltSink, DetectsEscapingHaltStates)
{
  EXPECT_FALSE(sat(encode_halt_sink_check(testing::halting_counter())));
  TransitionSystem leaky = parse_system(
      "(system (var x (bv 3)) (init (= x 0)) (trans (= (next x) (bvadd x 1)))"
      " (prop p true) (halt (= x 2)))");
  EXPECT_TRUE(sat(encode_halt_sink_check(leaky)));
}

}  // namespace
}  // namespace kindmc
