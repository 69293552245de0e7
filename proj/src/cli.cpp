#include "kindmc/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "kindmc/parser.h"
#include "kindmc/trace.h"

namespace kindmc {

int exit_code(Outcome o)
{
  switch (o) {
    case Outcome::Correct: return kExitCorrect;
    case Outcome::BugFound: return kExitBug;
    case Outcome::BoundExhausted: return kExitBoundExhausted;
  }
  return kExitError;
}

namespace {

std::string display_name(const std::filesystem::path &p) { return p.stem().string(); }

void write_file(const std::filesystem::path &p, const std::string &text)
{
  std::ofstream f(p, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot write " + p.string());
  }
  f << text;
  if (!f) {
    throw std::runtime_error("error writing " + p.string());
  }
}

std::string pad(const std::string &s, size_t w)
{
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string ms(double v)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << v;
  return os.str();
}

}  // namespace

std::vector<RunRecord> run_bench(const std::vector<BenchmarkSpec> &suite,
                                 const EngineConfig &cfg, unsigned jobs)
{
  cfg.validate();
  struct Task
  {
    BenchmarkSpec spec;
    EngineMode mode;
  };
  std::vector<Task> tasks;
  for (const auto &s : suite) {
    tasks.push_back({s, EngineMode::Plain});
    tasks.push_back({s, EngineMode::Extended});
  }
  std::vector<std::optional<RunRecord>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        EngineConfig c = cfg;
        c.mode = tasks[i].mode;
        const TransitionSystem sys = generate_benchmark(tasks[i].spec);
        results[i] = make_record(benchmark_name(tasks[i].spec), run(sys, c));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<size_t>(jobs, tasks.size()); ++j) {
    pool.emplace_back(worker);
  }
  for (auto &t : pool) {
    t.join();
  }
  for (const auto &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  std::vector<RunRecord> out;
  for (auto &r : results) {
    out.push_back(std::move(*r));
  }
  std::sort(out.begin(), out.end(), [](const RunRecord &a, const RunRecord &b) {
    return std::tie(a.benchmark, a.mode) < std::tie(b.benchmark, b.mode);
  });
  return out;
}

int cmd_verify(const VerifyOptions &opts, std::ostream &out, std::ostream &)
{
  const TransitionSystem sys = parse_file(opts.file);
  const VerificationReport r = run(sys, opts.engine);
  const std::string name = display_name(opts.file);
  if (opts.output == OutputFormat::Json) {
    out << report_to_json(name, r, utc_timestamp());
  } else {
    out << report_to_text(name, r);
  }
  return exit_code(r.outcome);
}

int cmd_compare(const VerifyOptions &opts, std::ostream &out, std::ostream &err,
                const Runner &runner)
{
  const TransitionSystem sys = parse_file(opts.file);
  const std::string name = display_name(opts.file);
  Comparison c;
  int code = kExitCorrect;
  try {
    c = compare(sys, opts.engine, runner);
  } catch (const DiscrepancyError &e) {
    err << "error: discrepancy: " << e.what() << "\n";
    c = e.comparison;
    code = kExitDiscrepancy;
  }
  if (opts.output == OutputFormat::Json) {
    std::ostringstream os;
    os << "{\"plain\": " << record_to_json(make_record(name, c.plain))
       << ", \"extended\": " << record_to_json(make_record(name, c.extended))
       << ", \"k_delta\": " << c.k_delta() << ", \"agree\": "
       << (c.outcomes_agree() ? "true" : "false") << "}\n";
    out << os.str();
  } else {
    out << pad("mode", 10) << pad("outcome", 17) << pad("k", 6) << pad("time_ms", 10)
        << "solver_calls\n";
    for (const VerificationReport *r : {&c.plain, &c.extended}) {
      out << pad(to_string(r->config.mode), 10) << pad(to_string(r->outcome), 17)
          << pad(std::to_string(r->final_k), 6) << pad(ms(r->time_ms()), 10)
          << r->solver_calls() << "\n";
    }
    out << "delta: k_plain - k_ext = " << c.k_delta() << ", time ratio "
        << std::fixed << std::setprecision(2) << c.time_ratio() << ", solver calls "
        << c.plain.solver_calls() << " vs " << c.extended.solver_calls() << "\n";
  }
  if (code != kExitCorrect) {
    return code;
  }
  return exit_code(c.extended.outcome);
}

int cmd_bench(const BenchOptions &opts, std::ostream &out, std::ostream &err)
{
  const auto suite = benchmark_suite(opts.suite);
  const auto records = run_bench(suite, opts.engine, opts.jobs);
  const std::string json = records_to_json(records);
  const std::string md = records_to_markdown(records);
  if (opts.out) {
    write_file(*opts.out, json);
    auto md_path = *opts.out;
    md_path.replace_extension(".md");
    write_file(md_path, md);
  }
  if (opts.output == OutputFormat::Json) {
    out << json;
  } else {
    out << md;
  }
  int code = kExitCorrect;
  for (size_t i = 0; i + 1 < records.size(); i += 2) {
    const RunRecord &a = records[i];
    const RunRecord &b = records[i + 1];
    if (a.outcome != b.outcome && a.outcome != Outcome::BoundExhausted
        && b.outcome != Outcome::BoundExhausted) {
      err << "error: discrepancy on " << a.benchmark << ": " << to_string(a.outcome)
          << " vs " << to_string(b.outcome) << "\n";
      code = kExitDiscrepancy;
    }
  }
  return code;
}

int cmd_oracle(const OracleOptions &opts, std::ostream &out, std::ostream &)
{
  const TransitionSystem sys = parse_file(opts.file);
  const OracleResult r = bfs_check(sys, opts.limits);
  if (opts.output == OutputFormat::Json) {
    out << "{\"unsafe\": " << (r.unsafe ? "true" : "false") << ", \"shortest_len\": "
        << (r.shortest ? std::to_string(r.shortest->length()) : "null")
        << ", \"explored\": " << r.explored << ", \"depth\": " << r.depth << "}\n";
    return kExitCorrect;
  }
  if (r.unsafe) {
    out << "unsafe, shortest counterexample: " << r.shortest->length() << " states";
    if (r.shortest->violated_prop) {
      out << " (violates " << *r.shortest->violated_prop << ")";
    }
    out << "\n" << format_trace(*r.shortest);
  } else {
    out << "safe within explored space (" << r.explored << " states)\n";
  }
  return kExitCorrect;
}

namespace {

void add_engine_flags(CLI::App &cmd, EngineConfig &cfg, std::optional<std::string> &solver,
                      std::string &engine, std::string &recheck, bool &no_validate)
{
  cmd.add_option("--engine", engine, "k-induction variant")
      ->check(CLI::IsMember({"plain", "extended"}))
      ->default_val("extended");
  cmd.add_option("--max-k", cfg.max_k, "largest unrolling depth")
      ->check(CLI::Range(1u, 1000000u))
      ->default_val(100);
  cmd.add_option("--solver", solver, "enum or external:<command>");
  cmd.add_option("--target-recheck", recheck, "when new targets are first matched")
      ->check(CLI::IsMember({"same", "next"}))
      ->default_val("same");
  cmd.add_flag("--no-validate", no_validate, "skip witness replay");
  cmd.add_option("--timeout-ms", cfg.solver.timeout_ms, "per-query timeout (0 = none)")
      ->default_val(0);
  cmd.add_option("--enum-cap", cfg.solver.enumerator_bit_cap,
                 "enumerator limit on state+input bits per step")
      ->check(CLI::Range(1u, 30u))
      ->default_val(24);
}

void finish_engine(EngineConfig &cfg, const std::optional<std::string> &solver,
                   const std::string &engine, const std::string &recheck, bool no_validate)
{
  const unsigned timeout = cfg.solver.timeout_ms;
  const unsigned cap = cfg.solver.enumerator_bit_cap;
  cfg.solver = resolve_solver_config(solver, std::getenv("KINDMC_SOLVER"));
  cfg.solver.timeout_ms = timeout;
  cfg.solver.enumerator_bit_cap = cap;
  cfg.mode = engine == "plain" ? EngineMode::Plain : EngineMode::Extended;
  cfg.target_recheck =
      recheck == "next" ? TargetRecheck::NextIteration : TargetRecheck::SameIteration;
  cfg.validate_witness = !no_validate;
}

OutputFormat format_of(const std::string &s)
{
  return s == "json" ? OutputFormat::Json : OutputFormat::Human;
}

}  // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"k-induction model checker with inductive-counterexample targets", "kindmc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  VerifyOptions vopts;
  std::optional<std::string> solver;
  std::string engine, recheck, output;
  bool no_validate = false;

  auto *verify = app.add_subcommand("verify", "check the properties of a .kts system");
  verify->add_option("file", vopts.file, "system file")->required();
  add_engine_flags(*verify, vopts.engine, solver, engine, recheck, no_validate);
  verify->add_option("--output", output)->check(CLI::IsMember({"human", "json"}))
      ->default_val("human");

  auto *cmp = app.add_subcommand("compare", "run plain and extended engines side by side");
  cmp->add_option("file", vopts.file, "system file")->required();
  add_engine_flags(*cmp, vopts.engine, solver, engine, recheck, no_validate);
  cmp->add_option("--output", output)->check(CLI::IsMember({"human", "json"}))
      ->default_val("human");

  BenchOptions bopts;
  std::string bench_out;
  auto *bench = app.add_subcommand("bench", "run a benchmark suite in both modes");
  bench->add_option("--suite", bopts.suite)->default_val("paper-analogues");
  bench->add_option("--out", bench_out, "JSON output file (markdown goes next to it)");
  bench->add_option("--jobs", bopts.jobs, "concurrent tasks (0 = all cores)")->default_val(0);
  add_engine_flags(*bench, bopts.engine, solver, engine, recheck, no_validate);
  bench->add_option("--output", output)->check(CLI::IsMember({"human", "json"}))
      ->default_val("human");

  OracleOptions oopts;
  auto *oracle = app.add_subcommand("oracle", "explicit-state BFS ground truth");
  oracle->add_option("file", oopts.file, "system file")->required();
  oracle->add_option("--cap", oopts.limits.state_bits, "state-bit limit")->default_val(20);
  oracle->add_option("--output", output)->check(CLI::IsMember({"human", "json"}))
      ->default_val("human");

  std::string family;
  uint64_t depth = 0;
  bool safe = false;
  auto *gen = app.add_subcommand("generate", "print a generated benchmark as .kts");
  gen->add_option("family", family)->required()->check(
      CLI::IsMember({"chain_bug", "diamond_parity", "const_check", "accumulator"}));
  gen->add_option("depth", depth)->required();
  gen->add_flag("--safe", safe, "accumulator without its bug");

  std::vector<const char *> argv{"kindmc"};
  for (const auto &a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (verify->parsed() || cmp->parsed()) {
      finish_engine(vopts.engine, solver, engine, recheck, no_validate);
      vopts.output = format_of(output);
      return verify->parsed() ? cmd_verify(vopts, out, err) : cmd_compare(vopts, out, err);
    }
    if (bench->parsed()) {
      finish_engine(bopts.engine, solver, engine, recheck, no_validate);
      bopts.output = format_of(output);
      if (!bench_out.empty()) {
        bopts.out = bench_out;
      }
      return cmd_bench(bopts, out, err);
    }
    if (oracle->parsed()) {
      oopts.output = format_of(output);
      return cmd_oracle(oopts, out, err);
    }
    BenchmarkSpec spec{*family_from_string(family), depth, !safe};
    out << print_system(generate_benchmark(spec));
    return kExitCorrect;
  } catch (const ParseError &e) {
    err << "error: " << e.what() << "\n";
  } catch (const ConfigError &e) {
    err << "error: configuration: " << e.what() << "\n";
  } catch (const CapError &e) {
    err << "error: " << e.what() << "\n";
  } catch (const BenchmarkError &e) {
    err << "error: " << e.what() << "\n";
  } catch (const EngineError &e) {
    err << "error: run aborted: " << e.what() << "\n";
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace kindmc
