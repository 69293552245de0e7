#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kindmc/encoder.h"
#include "kindmc/ir.h"
#include "kindmc/solver.h"
#include "kindmc/target.h"

namespace kindmc {

enum class EngineMode
{
  Plain,
  Extended
};

/// when a freshly harvested target is first tried against forward paths
enum class TargetRecheck
{
  SameIteration,
  NextIteration
};

enum class Outcome
{
  BugFound,
  Correct,
  BoundExhausted
};

enum class ProofSource
{
  ForwardCondition,
  InductiveStep
};

std::string to_string(EngineMode m);
std::string to_string(TargetRecheck r);
std::string to_string(Outcome o);
std::string to_string(ProofSource p);

/// sees every query the engine issues, with the solver's answer
using QueryObserver = std::function<void(const Query &, const SolverVerdict &)>;

struct EngineConfig
{
  EngineMode mode = EngineMode::Extended;
  unsigned max_k = 100;
  TargetRecheck target_recheck = TargetRecheck::SameIteration;
  SolverConfig solver;
  /// replay every witness and target suffix; a failure is an internal error
  bool validate_witness = true;
  QueryObserver on_query;

  void validate() const;
};

/// engine invariant broken or solver failure; the run is aborted
class EngineError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct QueryStat
{
  QueryKind kind = QueryKind::BaseCase;
  /// restricted to the new target's match disjuncts
  bool targets_only = false;
  SolverStatus status = SolverStatus::Unknown;
  double time_ms = 0;
  std::string diagnostic;
};

struct IterationStats
{
  unsigned k = 0;
  std::vector<QueryStat> queries;
  unsigned targets_added = 0;
  double time_ms = 0;
};

struct VerificationReport
{
  Outcome outcome = Outcome::BoundExhausted;
  unsigned final_k = 0;
  std::optional<Trace> witness;
  std::optional<ProofSource> proof_source;
  /// target whose suffix completes the witness, when the bug was found by a
  /// target match
  std::optional<int> matched_target;
  std::vector<IterationStats> iterations;
  std::vector<Target> targets;
  std::vector<std::string> warnings;
  /// some query of the run answered Unknown
  bool inconclusive = false;
  EngineConfig config;

  unsigned solver_calls() const;
  unsigned targets_added() const;
  double time_ms() const;
};

VerificationReport run_plain(const TransitionSystem &sys, const EngineConfig &cfg);
VerificationReport run_extended(const TransitionSystem &sys, const EngineConfig &cfg);
/// dispatches on cfg.mode
VerificationReport run(const TransitionSystem &sys, const EngineConfig &cfg);

/** Joins a forward path ending at t.first_state with the target's suffix;
 *  the shared state appears once. Throws InternalError if the prefix does
 *  not end at the target. */
Trace stitch(const Trace &forward_prefix, const Target &t);

struct Comparison
{
  VerificationReport plain;
  VerificationReport extended;

  /// k_plain - k_ext
  int k_delta() const;
  /// plain time / extended time (0 when the extended run took no time)
  double time_ratio() const;
  bool outcomes_agree() const;
};

/// one arm says BugFound and the other Correct
class DiscrepancyError : public std::runtime_error
{
 public:
  DiscrepancyError(const std::string &msg, Comparison c)
      : std::runtime_error(msg), comparison(std::move(c))
  {
  }
  Comparison comparison;
};

using Runner =
    std::function<VerificationReport(const TransitionSystem &, const EngineConfig &)>;

/** Runs both modes (concurrently, each with its own solver session) on the
 *  same system and solver configuration. Throws DiscrepancyError when the
 *  outcomes contradict each other. */
Comparison compare(const TransitionSystem &sys, const EngineConfig &base,
                   const Runner &runner = run);

}  // namespace kindmc
