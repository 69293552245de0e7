#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "kindmc/encoder.h"
#include "kindmc/ir.h"

namespace kindmc {

enum class SolverStatus
{
  Sat,
  Unsat,
  Unknown
};

std::string to_string(SolverStatus s);

/// declared name (TimedVar or marker) -> value; booleans are 0/1
using Model = std::map<std::string, uint64_t>;

struct SolverVerdict
{
  SolverStatus status = SolverStatus::Unknown;
  Model model;  // present iff Sat
  /// why the verdict is Unknown (timeout, solver said unknown, failure)
  std::string diagnostic;
  /// Unknown caused by a broken solver (spawn failure, protocol violation)
  /// rather than an inconclusive answer
  bool failed = false;
};

enum class BackendKind
{
  Enumerator,
  External
};

class ConfigError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

class ProtocolError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig
{
  BackendKind backend = BackendKind::Enumerator;
  /// shell command line for the external backend, e.g. "z3 -in"
  std::string command;
  /// per query, 0 = none
  unsigned timeout_ms = 0;
  /** Enumerator limit on the bits of one unrolling step (state + input
   *  variables). Queries without a frame structure are limited on their
   *  total declared bits instead. */
  unsigned enumerator_bit_cap = 24;

  void validate() const;
};

/** Resolves the backend from a CLI value ("enum", "external",
 *  "external:<cmd>") and the KINDMC_SOLVER environment variable. The flag
 *  wins; with no flag, KINDMC_SOLVER selects the external backend. */
SolverConfig resolve_solver_config(const std::optional<std::string> &flag,
                                   const char *env_command);

/** One solver session. Not safe to use from two threads at once; each
 *  verification task owns its own. */
class Solver
{
 public:
  virtual ~Solver() = default;
  virtual SolverVerdict check(const Query &q) = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<Solver> make_solver(const SolverConfig &cfg);

/// one-shot convenience over a fresh session
SolverVerdict check(const Query &q, const SolverConfig &cfg);

/** Exhaustive backend. Queries with an Unrolling are searched step by step
 *  (depth-first, ascending values in declaration order, failed (step,
 *  state) pairs memoized), which makes the first model found the
 *  lexicographically smallest one. Other queries are enumerated over all
 *  declared names. Every Sat model is re-checked against the flat formula
 *  with the concrete evaluator. */
class EnumeratorSolver : public Solver
{
 public:
  explicit EnumeratorSolver(SolverConfig cfg);
  ~EnumeratorSolver() override;

  SolverVerdict check(const Query &q) override;
  std::string name() const override { return "enumerator"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/** SMT-LIB2 process backend: one process per query, the document on
 *  standard input, `sat`/`unsat`/`unknown` read back, then get-value when
 *  satisfiable. */
class ExternalSolver : public Solver
{
 public:
  explicit ExternalSolver(SolverConfig cfg);

  SolverVerdict check(const Query &q) override;
  std::string name() const override { return "external:" + cfg_.command; }

 private:
  SolverConfig cfg_;
};

/// parse a get-value response into a Model; throws ProtocolError
Model parse_get_value(const std::string &text, const Query &q);

/// fired disjunct and decoded trace of a model
struct DecodedResult
{
  /// index into q.markers of the fired marker (base-case kinds only)
  std::optional<size_t> marker;
  unsigned depth = 0;
  std::optional<int> target_id;
  Trace trace;
};

/** Base-case kinds: the fired marker with least depth (a direct violation
 *  before a target match at equal depth) and the trace s_1..s_depth.
 *  Other kinds: the full trace s_1..s_k; inductive-step traces carry the
 *  violated property at s_k. Throws ProtocolError on missing bindings. */
DecodedResult decode_model(const TransitionSystem &sys, const Query &q,
                           const Model &model);

}  // namespace kindmc
