#include <gtest/gtest.h>

#include "kindmc/benchmarks.h"
#include "kindmc/oracle.h"
#include "kindmc/parser.h"
#include "support/corpus.h"

namespace kindmc {
namespace {

constexpr const char *kMinimal =
    "(system (var x (bv 3)) (init (= x 0)) (trans (= (next x) (bvadd x 1)))"
    " (prop p1 (not (= x 5))) (halt false))";

ParseError parse_error(const std::string &text)
{
  try {
    parse_system(text);
  } catch (const ParseError &e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ParseError(ParseErrorKind::Syntax, {}, "none");
}

TEST(Parser, MinimalDocument)
{
  TransitionSystem sys = parse_system(kMinimal);
  ASSERT_EQ(sys.vars.size(), 1u);
  EXPECT_EQ(sys.vars[0].name, "x");
  EXPECT_EQ(sys.vars[0].sort, Sort::bitvec(3));
  EXPECT_EQ(sys.vars[0].role, VarRole::State);
  ASSERT_EQ(sys.props.size(), 1u);
  EXPECT_EQ(sys.props[0].name, "p1");
  EXPECT_TRUE(structurally_equal(sys.init, mk_eq(mk_var("x", Sort::bitvec(3)), mk_bv(0, 3))));
  EXPECT_TRUE(structurally_equal(sys.halt, mk_false()));
}

TEST(Parser, LiteralsAndComments)
{
  TransitionSystem sys = parse_system(
      "; leading comment\n"
      "(system (var x (bv 8)) (var b bool) (input i (bv 8))\n"
      "  (init (and (= x #x0a) b))  ; trailing\n"
      "  (trans (and (= (next x) (bvadd x (bvadd i (_ bv1 8)))) (= (next b) (bvult x #b00001111))))\n"
      "  (prop p (bvule x 200)) (halt false))");
  EXPECT_EQ(sys.state_bits(), 9u);
  EXPECT_EQ(sys.input_bits(), 8u);
}

TEST(Parser, NextOutsideTrans)
{
  auto e = parse_error(
      "(system (var x (bv 3)) (init (= x 0)) (trans (= (next x) x))"
      " (prop p (= (next x) 0)) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::NextOutsideTrans);
}

TEST(Parser, SortErrorNamesBothSorts)
{
  auto e = parse_error(
      "(system (var x (bv 3)) (var b bool) (init (= b x)) (trans true)"
      " (prop p b) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::Sort);
  const std::string msg = e.what();
  EXPECT_NE(msg.find(print_sort(Sort::boolean())), std::string::npos) << msg;
  EXPECT_NE(msg.find(print_sort(Sort::bitvec(3))), std::string::npos) << msg;
}

TEST(Parser, ErrorKindsAndPositions)
{
  auto e = parse_error("(system (var x (bv 3))\n  (init (= y 0)) (trans true) (prop p true) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::Undeclared);
  EXPECT_EQ(e.pos().line, 2);

  e = parse_error("(system (var x (bv 3)) (var x bool) (init true) (trans true) (prop p true) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::Duplicate);

  e = parse_error("(system (var x (bv 3)) (init true) (prop p true) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::MissingSection);

  e = parse_error("(system (var x (bv 3)) (init true) (trans true) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::MissingSection);

  e = parse_error("(system (var x (bv 3)) (init true)");
  EXPECT_EQ(e.kind(), ParseErrorKind::Syntax);

  e = parse_error("(system (var x (bv 3)) (input i bool) (init i) (trans true) (prop p true) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::InputOutsideTrans);

  e = parse_error("(system (var x (bv 3)) (init (= x 9)) (trans true) (prop p true) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::Sort);

  e = parse_error("(system (var x (bv 3)) (init (= 1 2)) (trans true) (prop p true) (halt false))");
  EXPECT_EQ(e.kind(), ParseErrorKind::Sort);
}

TEST(Parser, MissingFileIsIoError)
{
  try {
    parse_file("/nonexistent/x.kts");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::Io);
  }
}

void expect_same_system(const TransitionSystem &a, const TransitionSystem &b)
{
  ASSERT_EQ(a.vars, b.vars);
  EXPECT_TRUE(structurally_equal(a.init, b.init));
  EXPECT_TRUE(structurally_equal(a.trans, b.trans));
  EXPECT_TRUE(structurally_equal(a.halt, b.halt));
  ASSERT_EQ(a.props.size(), b.props.size());
  for (size_t i = 0; i < a.props.size(); ++i) {
    EXPECT_EQ(a.props[i].name, b.props[i].name);
    EXPECT_TRUE(structurally_equal(a.props[i].expr, b.props[i].expr));
  }
}

TEST(Parser, PrintParseRoundTripOnRandomSystems)
{
  for (const auto &sys : testing::random_corpus(4242, 150)) {
    const std::string text = print_system(sys);
    TransitionSystem back = parse_system(text);
    expect_same_system(sys, back);
    EXPECT_EQ(print_system(back), text);
  }
}

TEST(Parser, ModelFilesParse)
{
  for (const char *name : {"chain5", "safe_sat", "halt_sink", "identity", "handshake", "const8"}) {
    EXPECT_NO_THROW(parse_file(std::string(KINDMC_MODELS_DIR) + "/" + name + ".kts")) << name;
  }
}

TEST(Benchmarks, ChainBugShape)
{
  TransitionSystem sys = generate_benchmark({BenchmarkFamily::ChainBug, 5});
  ASSERT_EQ(sys.state_vars().size(), 1u);
  EXPECT_EQ(sys.state_vars()[0].sort, Sort::bitvec(3));
  auto r = bfs_check(sys);
  ASSERT_TRUE(r.unsafe);
  EXPECT_EQ(r.shortest->length(), 6u);
}

TEST(Benchmarks, ConstCheckEight)
{
  auto r = bfs_check(generate_benchmark({BenchmarkFamily::ConstCheck, 8}));
  ASSERT_TRUE(r.unsafe);
  EXPECT_EQ(r.shortest->length(), 10u);
}

TEST(Benchmarks, SafeAccumulatorHasNoCounterexample)
{
  auto r = bfs_check(generate_benchmark({BenchmarkFamily::Accumulator, 4, false}));
  EXPECT_FALSE(r.unsafe);
  EXPECT_GT(r.explored, 0u);
}

TEST(Benchmarks, DocumentedLengthsMatchOracle)
{
  const BenchmarkFamily families[] = {BenchmarkFamily::ChainBug, BenchmarkFamily::DiamondParity,
                                      BenchmarkFamily::ConstCheck, BenchmarkFamily::Accumulator};
  for (auto f : families) {
    for (uint64_t d = 1; d <= 20; ++d) {
      for (bool buggy : {true, false}) {
        if (!buggy && f != BenchmarkFamily::Accumulator) {
          continue;
        }
        BenchmarkSpec spec{f, d, buggy};
        TransitionSystem sys = generate_benchmark(spec);
        EXPECT_NO_THROW(sys.validate());
        auto r = bfs_check(sys);
        auto expected = expected_shortest_cex(spec);
        ASSERT_EQ(r.unsafe, expected.has_value()) << benchmark_name(spec);
        if (expected) {
          EXPECT_EQ(r.shortest->length(), *expected) << benchmark_name(spec);
        }
      }
    }
  }
}

TEST(Benchmarks, NamesAndErrors)
{
  EXPECT_EQ(benchmark_name({BenchmarkFamily::ChainBug, 5}), "chain_bug_5");
  EXPECT_EQ(benchmark_name({BenchmarkFamily::Accumulator, 4, false}), "accumulator_safe_4");
  EXPECT_THROW(generate_benchmark({BenchmarkFamily::ChainBug, 0}), BenchmarkError);
  EXPECT_THROW(generate_benchmark({BenchmarkFamily::Accumulator, uint64_t{1} << 63}), BenchmarkError);
  EXPECT_THROW(benchmark_suite("nope"), BenchmarkError);
  for (const auto &s : suite_names()) {
    EXPECT_FALSE(benchmark_suite(s).empty()) << s;
  }
  EXPECT_EQ(family_from_string("diamond_parity"), BenchmarkFamily::DiamondParity);
  EXPECT_FALSE(family_from_string("fibonacci"));
}

}  // namespace
}  // namespace kindmc
