#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kindmc/ir.h"

namespace kindmc {

enum class BenchmarkFamily
{
  ChainBug,       // deterministic counter that hits a bad value
  DiamondParity,  // counter nondeterministically incremented by 1 or 2,
                  // asserted even after the loop
  ConstCheck,     // loop of d iterations, then the wrong value is asserted
  Accumulator     // running sum of 2s checked against 2*i, safe or buggy
};

struct BenchmarkSpec
{
  BenchmarkFamily family = BenchmarkFamily::ChainBug;
  uint64_t depth = 1;
  /// accumulator only; every other family always contains its bug
  bool buggy = true;
};

/// parameter out of range (depth 0, required width above 64 bits)
class BenchmarkError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

TransitionSystem generate_benchmark(const BenchmarkSpec &spec);

/** Documented shortest counterexample length in states, or nullopt for
 *  safe instances:
 *    chain_bug(d)       d + 1
 *    diamond_parity(d)  d + 1
 *    const_check(d)     d + 2
 *    accumulator(d)     d + 1 (buggy), none (safe) */
std::optional<uint64_t> expected_shortest_cex(const BenchmarkSpec &spec);

/// "chain_bug_5", "accumulator_safe_4", ...
std::string benchmark_name(const BenchmarkSpec &spec);

std::string to_string(BenchmarkFamily f);
std::optional<BenchmarkFamily> family_from_string(const std::string &s);

/// named suites; throws BenchmarkError for unknown names
std::vector<BenchmarkSpec> benchmark_suite(const std::string &name);
std::vector<std::string> suite_names();

}  // namespace kindmc
