#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kindmc/ir.h"
#include "kindmc/target.h"

namespace kindmc {

enum class QueryKind
{
  BaseCase,
  ForwardCondition,
  InductiveStep,
  ExtendedBaseCase,
  HaltSink  // lint: halt(s1) & T(s1,s2) & !halt(s2)
};

std::string to_string(QueryKind k);

/// copy of a variable at unrolling step `step` (1-based), rendered base@step
struct TimedVar
{
  std::string base;
  unsigned step = 1;
  Sort sort;
  VarRole role = VarRole::State;

  std::string name() const { return base + "@" + std::to_string(step); }
};

/** Boolean selector defined as `name <=> definition`. Base-case queries
 *  carry one per depth (direct violation) and, for the extended base case,
 *  one per (target, depth) pair, so a single model tells which disjunct
 *  fired. */
struct Marker
{
  std::string name;
  unsigned depth = 1;
  std::optional<int> target_id;
  Expr definition;
};

inline constexpr size_t kNoMarker = std::numeric_limits<size_t>::max();

/// condition over untimed state variables, optionally tied to a marker
struct StepGoal
{
  size_t marker = kNoMarker;
  Expr condition;
};

/** Frame-level description of an unrolled query, equivalent to the flat
 *  assertion. Solvers that understand unrollings search it step by step.
 *
 *  any_depth: satisfiable iff for some step i, init holds at step 1, trans
 *  links steps 1..i, assume[j] holds at steps j <= i and some goal of step
 *  i holds. Otherwise the path spans every step and a goal of the last
 *  step must hold. Null init/assume entries mean "true". */
struct Unrolling
{
  std::vector<VarDecl> vars;
  Expr init;
  Expr trans;
  bool any_depth = true;
  std::vector<Expr> assume;
  std::vector<std::vector<StepGoal>> goals;
};

struct Query
{
  QueryKind kind = QueryKind::BaseCase;
  unsigned depth = 1;
  /// step-major: state vars @1, inputs @1, state vars @2, ...; inputs are
  /// declared for steps 1..depth-1 only
  std::vector<TimedVar> decls;
  std::vector<Marker> markers;
  /// main assertion; may reference marker names as boolean variables
  Expr assertion;
  std::optional<Unrolling> unrolling;

  /// conjunction of every marker definition and the main assertion
  Expr full_formula() const;
  const TimedVar *find_decl(const std::string &name) const;
};

/// rename every variable to its copy at `step`; (next x) becomes x@(step+1)
Expr timed(const Expr &e, unsigned step);

/// conjunction of var@step = value over every state variable
Expr state_match(const TransitionSystem &sys, const State &s, unsigned step);

/// I(s1) & OR_{i=1..k} [ T(s1,s2) & ... & T(s_{i-1},s_i) & !phi(s_i) ]
Query encode_base_case(const TransitionSystem &sys, unsigned k);

/// I(s1) & T(s1,s2) & ... & T(s_{k-1},s_k) & !halt(s_k)
Query encode_forward_condition(const TransitionSystem &sys, unsigned k);

/// T(s1,s2) & ... & T(s_{k-1},s_k) & phi(s1) & ... & phi(s_{k-1}) & !phi(s_k)
Query encode_inductive_step(const TransitionSystem &sys, unsigned k);

/** Base case whose depth-i disjunct also fires when s_i equals the first
 *  state of any target. With targets_only, the direct-violation disjuncts
 *  are dropped and only target matches remain. */
Query encode_extended_base_case(const TransitionSystem &sys, unsigned k,
                                std::span<const Target> targets,
                                bool targets_only = false);

Query encode_halt_sink_check(const TransitionSystem &sys);

/// SMT-LIB2 (QF_BV) document; byte-identical for identical queries
std::string serialize_smtlib(const Query &q);
std::string to_smtlib(const Expr &e);
std::string to_smtlib(const Sort &s);

/// document prefix up to and including (check-sat), without get-value
std::string serialize_smtlib_check(const Query &q);
/// names requested by get-value, in declaration order (vars then markers)
std::vector<std::string> model_names(const Query &q);

}  // namespace kindmc
