#pragma once

#include <optional>
#include <string>

#include "kindmc/ir.h"

namespace kindmc {

struct ReplayVerdict
{
  bool valid = false;
  /// index of the first failing state (init/prop) or step (trans)
  std::optional<size_t> index;
  /// "structure", "init", "trans" or "prop"
  std::string clause;
  std::string reason;

  explicit operator bool() const { return valid; }
};

struct ReplayOptions
{
  /// inductive-step traces start anywhere, so init is not required
  bool check_init = true;
};

/** Replays `t` against `sys` with the concrete evaluator: init at
 *  states[0], trans on every step, and violated_prop (when set) false at the
 *  final state. Never throws for malformed traces; returns an invalid
 *  verdict with the reason instead. */
ReplayVerdict replay_trace(const TransitionSystem &sys,
                           const Trace &t,
                           const ReplayOptions &opts = {});

/** StateVar-wise equality. Throws InternalError if the two states bind
 *  different variable sets. */
bool states_equal(const State &a, const State &b);

/// first property (declaration order) that is false in `s`, if any
std::optional<std::string> first_violated_prop(const TransitionSystem &sys,
                                               const State &s);

}  // namespace kindmc
