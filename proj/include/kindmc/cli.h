#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kindmc/benchmarks.h"
#include "kindmc/engine.h"
#include "kindmc/oracle.h"
#include "kindmc/report.h"

namespace kindmc {

enum ExitCode : int
{
  kExitCorrect = 0,
  kExitBug = 1,
  kExitBoundExhausted = 2,
  kExitError = 3,
  kExitDiscrepancy = 4
};

int exit_code(Outcome o);

enum class OutputFormat
{
  Human,
  Json
};

struct VerifyOptions
{
  std::filesystem::path file;
  EngineConfig engine;
  OutputFormat output = OutputFormat::Human;
};

struct BenchOptions
{
  std::string suite = "paper-analogues";
  EngineConfig engine;
  /// JSON records go here and the markdown table next to it (.md)
  std::optional<std::filesystem::path> out;
  OutputFormat output = OutputFormat::Human;
  /// concurrent tasks; 0 = hardware concurrency
  unsigned jobs = 0;
};

struct OracleOptions
{
  std::filesystem::path file;
  OracleLimits limits;
  OutputFormat output = OutputFormat::Human;
};

/** Runs every suite entry in both modes, each task with its own solver
 *  session, and returns the records sorted by (benchmark, mode). */
std::vector<RunRecord> run_bench(const std::vector<BenchmarkSpec> &suite,
                                 const EngineConfig &cfg, unsigned jobs = 0);

int cmd_verify(const VerifyOptions &opts, std::ostream &out, std::ostream &err);
int cmd_compare(const VerifyOptions &opts, std::ostream &out, std::ostream &err,
                const Runner &runner = run);
int cmd_bench(const BenchOptions &opts, std::ostream &out, std::ostream &err);
int cmd_oracle(const OracleOptions &opts, std::ostream &out, std::ostream &err);

/// arguments after the program name: `<verify|compare|bench|oracle|generate> ...`
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace kindmc
