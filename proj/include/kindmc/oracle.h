#pragma once

#include <optional>
#include <stdexcept>

#include "kindmc/ir.h"

namespace kindmc {

/// system too large for explicit-state exploration
class CapError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleLimits
{
  unsigned state_bits = 20;
  unsigned input_bits = 16;
};

struct OracleResult
{
  bool unsafe = false;
  /// shortest violating trace, when unsafe
  std::optional<Trace> shortest;
  /// distinct reachable states discovered
  uint64_t explored = 0;
  /// BFS level reached: cex length - 1 when unsafe, else the diameter of
  /// the reachable set
  unsigned depth = 0;
};

/** Breadth-first exploration of the concrete state graph. Initial states
 *  and successors are visited in ascending packed order (inputs before
 *  next state, first declared variable most significant), so the reported
 *  trace is deterministic. Throws CapError when the system exceeds
 *  `limits`. */
OracleResult bfs_check(const TransitionSystem &sys, OracleLimits limits = {});

/// true iff `s` is reachable from some initial state
bool reachable(const TransitionSystem &sys, const State &s, OracleLimits limits = {});

/// every reachable state, in BFS order
std::vector<State> reachable_states(const TransitionSystem &sys,
                                    OracleLimits limits = {});

}  // namespace kindmc
