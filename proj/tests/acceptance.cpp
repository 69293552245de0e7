// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 if
// any criterion fails.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kindmc/benchmarks.h"
#include "kindmc/cli.h"
#include "kindmc/encoder.h"
#include "kindmc/engine.h"
#include "kindmc/oracle.h"
#include "kindmc/report.h"
#include "kindmc/trace.h"
#include "support/corpus.h"

using namespace kindmc;
using kindmc::testing::random_corpus;

namespace {

// Pinned thresholds.
constexpr double kAc1BudgetMs = 10'000;
constexpr double kAc2BudgetMs = 60'000;
constexpr size_t kCorpusSize = 240;
constexpr uint64_t kCorpusSeed = 20240601;
constexpr size_t kMinUnsafe = 60;
constexpr size_t kMinSpurious = 20;
constexpr unsigned kSafeMaxK = 12;
constexpr unsigned kSpuriousMaxK = 40;
constexpr unsigned kEncodingMaxK = 8;

struct Verdict
{
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
};

class Checker
{
 public:
  void expect(bool ok, const std::string &what)
  {
    if (!ok && failures_.size() < 5) {
      failures_.push_back(what);
    }
    failed_ |= !ok;
  }
  bool failed() const { return failed_; }
  std::string failures() const
  {
    std::string s;
    for (const auto &f : failures_) {
      s += (s.empty() ? "" : "; ") + f;
    }
    return s;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
};

Verdict finish(const Checker &c, const std::string &summary)
{
  if (c.failed()) {
    return {Verdict::Fail, summary + " | " + c.failures()};
  }
  return {Verdict::Pass, summary};
}

double elapsed_ms(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

EngineConfig config(EngineMode mode, unsigned max_k)
{
  EngineConfig c;
  c.mode = mode;
  c.max_k = max_k;
  return c;
}

std::string str(unsigned v) { return std::to_string(v); }

const std::vector<TransitionSystem> &corpus()
{
  static const auto c = random_corpus(kCorpusSeed, kCorpusSize);
  return c;
}

const std::vector<OracleResult> &corpus_oracle()
{
  static const auto r = [] {
    std::vector<OracleResult> out;
    for (const auto &s : corpus()) {
      out.push_back(bfs_check(s));
    }
    return out;
  }();
  return r;
}

unsigned max_k_for(const OracleResult &o)
{
  return o.unsafe ? static_cast<unsigned>(o.shortest->length()) : kSafeMaxK;
}

Verdict ac1_halving()
{
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  for (uint64_t d = 3; d <= 20; ++d) {
    const auto sys = generate_benchmark({BenchmarkFamily::ChainBug, d});
    const auto p = run_plain(sys, config(EngineMode::Plain, 64));
    const auto e = run_extended(sys, config(EngineMode::Extended, 64));
    const std::string tag = "d=" + std::to_string(d);
    c.expect(p.outcome == Outcome::BugFound && p.final_k == d + 1,
             tag + " k_plain=" + str(p.final_k));
    c.expect(e.outcome == Outcome::BugFound && e.final_k <= p.final_k / 2 + 1,
             tag + " k_ext=" + str(e.final_k) + " > " + str(p.final_k / 2 + 1));
  }
  const double ms = elapsed_ms(t0);
  c.expect(ms < kAc1BudgetMs, "runtime " + std::to_string(ms) + " ms");
  return finish(c, "chain_bug d=3..20, k_plain=d+1, k_ext<=floor(k_plain/2)+1, "
                       + std::to_string(static_cast<long>(ms)) + " ms");
}

Verdict ac2_table_analogue()
{
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cc = generate_benchmark({BenchmarkFamily::ConstCheck, 64});
  const auto oracle = bfs_check(cc);
  c.expect(oracle.unsafe && oracle.shortest->length() == 66, "const_check oracle depth != 66");
  const auto cp = run_plain(cc, config(EngineMode::Plain, 100));
  const auto ce = run_extended(cc, config(EngineMode::Extended, 100));
  c.expect(cp.outcome == Outcome::BugFound && cp.final_k == 66,
           "const k_plain=" + str(cp.final_k));
  c.expect(ce.outcome == Outcome::BugFound && ce.final_k <= 34,
           "const k_ext=" + str(ce.final_k));

  const auto dm = generate_benchmark({BenchmarkFamily::DiamondParity, 25});
  const auto dp = run_plain(dm, config(EngineMode::Plain, 100));
  const auto de = run_extended(dm, config(EngineMode::Extended, 100));
  c.expect(dp.outcome == Outcome::BugFound && de.outcome == Outcome::BugFound,
           "diamond outcomes");
  c.expect(de.final_k <= dp.final_k / 2 + 1,
           "diamond k_ext=" + str(de.final_k) + " k_plain=" + str(dp.final_k));
  const double ms = elapsed_ms(t0);
  c.expect(ms < kAc2BudgetMs, "runtime " + std::to_string(ms) + " ms");
  return finish(c, "const_check(64) k " + str(cp.final_k) + "->" + str(ce.final_k)
                       + ", diamond_parity(25) k " + str(dp.final_k) + "->"
                       + str(de.final_k) + ", " + std::to_string(static_cast<long>(ms))
                       + " ms");
}

Verdict ac3_plain_optimality()
{
  Checker c;
  size_t unsafe = 0;
  for (size_t i = 0; i < corpus().size(); ++i) {
    const auto &o = corpus_oracle()[i];
    if (!o.unsafe) {
      continue;
    }
    ++unsafe;
    const auto r = run_plain(corpus()[i], config(EngineMode::Plain, max_k_for(o)));
    c.expect(r.outcome == Outcome::BugFound && r.witness
                 && r.witness->length() == o.shortest->length(),
             "system " + std::to_string(i) + ": plain " + to_string(r.outcome) + " len "
                 + std::to_string(r.witness ? r.witness->length() : 0) + " vs oracle "
                 + std::to_string(o.shortest->length()));
  }
  c.expect(unsafe >= kMinUnsafe, "only " + std::to_string(unsafe) + " unsafe systems");
  return finish(c, std::to_string(corpus().size()) + " random systems, "
                       + std::to_string(unsafe) + " unsafe, witness length = oracle");
}

Verdict ac4_agreement()
{
  Checker c;
  size_t runs = 0, witnesses = 0;
  auto check_pair = [&](const std::string &name, const TransitionSystem &sys, unsigned max_k) {
    const auto p = run_plain(sys, config(EngineMode::Plain, max_k));
    const auto e = run_extended(sys, config(EngineMode::Extended, max_k));
    ++runs;
    c.expect(p.outcome == e.outcome,
             name + ": plain " + to_string(p.outcome) + " vs extended " + to_string(e.outcome));
    for (const auto *r : {&p, &e}) {
      if (r->outcome == Outcome::BugFound) {
        ++witnesses;
        c.expect(r->witness && r->witness->violated_prop
                     && replay_trace(sys, *r->witness).valid,
                 name + ": witness fails replay");
      }
    }
  };
  for (size_t i = 0; i < corpus().size(); ++i) {
    check_pair("system " + std::to_string(i), corpus()[i], max_k_for(corpus_oracle()[i]));
  }
  std::vector<BenchmarkSpec> specs = benchmark_suite("paper-analogues");
  for (const auto &s : benchmark_suite("smoke")) {
    specs.push_back(s);
  }
  for (uint64_t d = 3; d <= 20; ++d) {
    specs.push_back({BenchmarkFamily::ChainBug, d});
  }
  for (const auto &s : specs) {
    check_pair(benchmark_name(s), generate_benchmark(s), 100);
  }
  return finish(c, std::to_string(runs) + " systems in both modes, "
                       + std::to_string(witnesses) + " witnesses replayed");
}

Verdict ac5_spurious_targets()
{
  Checker c;
  const auto family = kindmc::testing::spurious_family();
  size_t targets = 0;
  c.expect(family.size() >= kMinSpurious, "family too small");
  for (const auto &[name, sys] : family) {
    c.expect(!bfs_check(sys).unsafe, name + ": not safe");
    const auto p = run_plain(sys, config(EngineMode::Plain, kSpuriousMaxK));
    const auto e = run_extended(sys, config(EngineMode::Extended, kSpuriousMaxK));
    c.expect(e.outcome != Outcome::BugFound, name + ": extended reports a bug");
    if (p.outcome == Outcome::Correct) {
      c.expect(e.outcome == Outcome::Correct && e.final_k == p.final_k
                   && e.proof_source == p.proof_source,
               name + ": extended " + to_string(e.outcome) + " k=" + str(e.final_k)
                   + " vs plain k=" + str(p.final_k));
    }
    c.expect(!e.targets.empty(), name + ": no target harvested");
    for (const auto &t : e.targets) {
      ++targets;
      c.expect(!reachable(sys, t.first_state), name + ": reachable target");
    }
  }
  return finish(c, std::to_string(family.size()) + " systems, " + std::to_string(targets)
                       + " unreachable targets, no bug reported");
}

Verdict ac6_encoding()
{
  Checker c;
  SolverConfig sc;
  size_t queries = 0;
  for (size_t i = 0; i < corpus().size(); ++i) {
    const auto &o = corpus_oracle()[i];
    auto solver = make_solver(sc);
    for (unsigned k = 1; k <= kEncodingMaxK; ++k) {
      const bool b = solver->check(encode_base_case(corpus()[i], k)).status == SolverStatus::Sat;
      const bool bx =
          solver->check(encode_extended_base_case(corpus()[i], k, {})).status
          == SolverStatus::Sat;
      queries += 2;
      const bool expected = o.unsafe && o.shortest->length() <= k;
      c.expect(b == expected, "system " + std::to_string(i) + " k=" + str(k) + ": B(k) "
                                  + (b ? "sat" : "unsat"));
      c.expect(b == bx, "system " + std::to_string(i) + " k=" + str(k) + ": B' differs");
    }
  }
  return finish(c, std::to_string(queries) + " base-case queries match the oracle");
}

Verdict ac7_proof_paths()
{
  Checker c;
  const auto sat = kindmc::testing::saturating_counter();
  const auto halt = kindmc::testing::halting_counter();
  for (auto mode : {EngineMode::Plain, EngineMode::Extended}) {
    const auto r = run(sat, config(mode, 20));
    c.expect(r.outcome == Outcome::Correct && r.final_k == 2
                 && r.proof_source == ProofSource::InductiveStep,
             to_string(mode) + " saturating: " + to_string(r.outcome) + " k=" + str(r.final_k));
    const auto h = run(halt, config(mode, 20));
    c.expect(h.outcome == Outcome::Correct && h.final_k == 8
                 && h.proof_source == ProofSource::ForwardCondition,
             to_string(mode) + " halting: " + to_string(h.outcome) + " k=" + str(h.final_k));
  }
  return finish(c, "saturating counter: inductive step at k=2; halting counter: forward "
                   "condition at k=8");
}

Verdict ac8_backend_agreement()
{
  const char *cmd = std::getenv("KINDMC_SOLVER");
  if (!cmd || !*cmd) {
    return {Verdict::Skip, "KINDMC_SOLVER not set"};
  }
  SolverConfig ext;
  ext.backend = BackendKind::External;
  ext.command = cmd;
  auto external = make_solver(ext);
  Checker c;
  size_t queries = 0;
  auto replay = [&](const std::string &name, const TransitionSystem &sys, unsigned max_k) {
    for (auto mode : {EngineMode::Plain, EngineMode::Extended}) {
      EngineConfig cfg = config(mode, max_k);
      cfg.on_query = [&](const Query &q, const SolverVerdict &v) {
        ++queries;
        const auto x = external->check(q);
        c.expect(x.status == v.status,
                 name + " " + to_string(q.kind) + " k=" + str(q.depth) + ": enumerator "
                     + to_string(v.status) + ", external " + to_string(x.status)
                     + (x.diagnostic.empty() ? "" : " (" + x.diagnostic + ")"));
      };
      run(sys, cfg);
    }
  };
  for (const auto &s : benchmark_suite("paper-analogues")) {
    replay(benchmark_name(s), generate_benchmark(s), 100);
  }
  for (const auto &[name, sys] : kindmc::testing::spurious_family()) {
    replay(name, sys, kSpuriousMaxK);
  }
  for (size_t i = 0; i < 40; ++i) {
    replay("system " + std::to_string(i), corpus()[i], max_k_for(corpus_oracle()[i]));
  }
  return finish(c, std::to_string(queries) + " queries agree with '" + cmd + "'");
}

void strip_timing(nlohmann::ordered_json &j)
{
  if (j.is_object()) {
    j.erase("time_ms");
    j.erase("timestamp");
    for (auto &[k, v] : j.items()) {
      strip_timing(v);
    }
  } else if (j.is_array()) {
    for (auto &v : j) {
      strip_timing(v);
    }
  }
}

std::string reports_for_suite()
{
  std::string all;
  for (const auto &s : benchmark_suite("paper-analogues")) {
    const auto sys = generate_benchmark(s);
    for (auto mode : {EngineMode::Plain, EngineMode::Extended}) {
      auto j = nlohmann::ordered_json::parse(
          report_to_json(benchmark_name(s), run(sys, config(mode, 100)), utc_timestamp()));
      strip_timing(j);
      all += j.dump() + "\n";
    }
  }
  auto records = nlohmann::ordered_json::parse(
      records_to_json(run_bench(benchmark_suite("paper-analogues"), config(EngineMode::Extended, 100), 2)));
  strip_timing(records);
  return all + records.dump() + "\n";
}

Verdict ac9_determinism()
{
  Checker c;
  const std::string first = reports_for_suite();
  const std::string second = reports_for_suite();
  c.expect(first == second, "reports differ between runs");
  return finish(c, "two runs of the paper-analogues suite, " + std::to_string(first.size())
                       + " bytes of JSON identical");
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1 iteration halving", ac1_halving},
      {"AC2 table analogue", ac2_table_analogue},
      {"AC3 plain-mode optimality", ac3_plain_optimality},
      {"AC4 soundness and agreement", ac4_agreement},
      {"AC5 spurious-target immunity", ac5_spurious_targets},
      {"AC6 encoding correctness", ac6_encoding},
      {"AC7 proof paths", ac7_proof_paths},
      {"AC8 backend agreement", ac8_backend_agreement},
      {"AC9 determinism", ac9_determinism},
  };
  int failures = 0;
  for (const auto &[name, fn] : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = fn();
    } catch (const std::exception &e) {
      v = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char *tag = v.kind == Verdict::Pass ? "PASS" : v.kind == Verdict::Fail ? "FAIL" : "SKIP";
    failures += v.kind == Verdict::Fail;
    std::cout << tag << "  " << name << ": " << v.detail << " ["
              << static_cast<long>(elapsed_ms(t0)) << " ms]" << std::endl;
  }
  std::cout << (failures ? "FAILED" : "OK") << ": " << criteria.size() - failures << "/"
            << criteria.size() << " criteria without failure" << std::endl;
  return failures ? 1 : 0;
}
