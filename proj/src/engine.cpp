#include "kindmc/engine.h"

#include <chrono>
#include <future>

#include "kindmc/trace.h"

namespace kindmc {

std::string to_string(EngineMode m)
{
  return m == EngineMode::Plain ? "plain" : "extended";
}

std::string to_string(TargetRecheck r)
{
  return r == TargetRecheck::SameIteration ? "same" : "next";
}

std::string to_string(Outcome o)
{
  switch (o) {
    case Outcome::BugFound: return "bug";
    case Outcome::Correct: return "correct";
    case Outcome::BoundExhausted: return "bound-exhausted";
  }
  return "?";
}

std::string to_string(ProofSource p)
{
  return p == ProofSource::ForwardCondition ? "forward" : "inductive";
}

void EngineConfig::validate() const
{
  if (max_k < 1) {
    throw ConfigError("max_k must be at least 1");
  }
  solver.validate();
}

unsigned VerificationReport::solver_calls() const
{
  unsigned n = 0;
  for (const auto &it : iterations) {
    n += static_cast<unsigned>(it.queries.size());
  }
  return n;
}

unsigned VerificationReport::targets_added() const
{
  unsigned n = 0;
  for (const auto &it : iterations) {
    n += it.targets_added;
  }
  return n;
}

double VerificationReport::time_ms() const
{
  double t = 0;
  for (const auto &it : iterations) {
    t += it.time_ms;
  }
  return t;
}

Trace stitch(const Trace &forward_prefix, const Target &t)
{
  if (forward_prefix.states.empty() || t.suffix.states.empty()) {
    throw InternalError("stitch: empty prefix or suffix");
  }
  if (!states_equal(forward_prefix.states.back(), t.first_state)
      || !states_equal(t.suffix.states.front(), t.first_state)) {
    throw InternalError("stitch: prefix does not end at target " + std::to_string(t.id));
  }
  Trace out = forward_prefix;
  out.states.insert(out.states.end(), t.suffix.states.begin() + 1, t.suffix.states.end());
  out.inputs.insert(out.inputs.end(), t.suffix.inputs.begin(), t.suffix.inputs.end());
  out.violated_prop = t.suffix.violated_prop;
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

class Driver
{
 public:
  Driver(const TransitionSystem &sys, const EngineConfig &cfg)
      : sys_(sys), solver_(make_solver(cfg.solver))
  {
    cfg.validate();
    report_.config = cfg;
  }

  VerificationReport run()
  {
    lint_halt_sink();
    const bool extended = report_.config.mode == EngineMode::Extended;
    for (unsigned k = 1; k <= report_.config.max_k; ++k) {
      iter_ = &report_.iterations.emplace_back();
      iter_->k = k;
      const auto t0 = Clock::now();
      const bool done = extended ? extended_iteration(k) : plain_iteration(k);
      iter_->time_ms = ms_since(t0);
      if (done) {
        report_.final_k = k;
        return std::move(report_);
      }
    }
    report_.outcome = Outcome::BoundExhausted;
    report_.final_k = report_.config.max_k;
    if (tainted_) {
      report_.warnings.push_back(
          "a base-case query was inconclusive; no proof could be reported");
    }
    return std::move(report_);
  }

 private:
  bool plain_iteration(unsigned k)
  {
    Query b = encode_base_case(sys_, k);
    auto v = ask(b, false);
    if (v.status == SolverStatus::Sat) {
      return bug_from(b, v.model);
    }
    tainted_ |= v.status == SolverStatus::Unknown;
    return proof_checks(k, nullptr);
  }

  bool extended_iteration(unsigned k)
  {
    Query b = encode_extended_base_case(sys_, k, report_.targets);
    auto v = ask(b, false);
    if (v.status == SolverStatus::Sat) {
      return bug_from(b, v.model);
    }
    tainted_ |= v.status == SolverStatus::Unknown;
    std::optional<Target> fresh;
    if (proof_checks(k, &fresh)) {
      return true;
    }
    if (fresh && report_.config.target_recheck == TargetRecheck::SameIteration) {
      const Target only[] = {*fresh};
      Query t = encode_extended_base_case(sys_, k, only, true);
      auto tv = ask(t, true);
      if (tv.status == SolverStatus::Sat) {
        return bug_from(t, tv.model);
      }
      tainted_ |= tv.status == SolverStatus::Unknown;
    }
    return false;
  }

  /// F(k) then I(k); harvests a target from I(k) when `fresh` is given
  bool proof_checks(unsigned k, std::optional<Target> *fresh)
  {
    auto f = ask(encode_forward_condition(sys_, k), false);
    if (f.status == SolverStatus::Unsat && !tainted_) {
      return proved(ProofSource::ForwardCondition);
    }
    Query iq = encode_inductive_step(sys_, k);
    auto i = ask(iq, false);
    if (i.status == SolverStatus::Unsat && !tainted_) {
      return proved(ProofSource::InductiveStep);
    }
    if (fresh && i.status == SolverStatus::Sat) {
      Trace suffix = decode(iq, i.model).trace;
      if (report_.config.validate_witness) {
        auto rv = replay_trace(sys_, suffix, {.check_init = false});
        if (!rv) {
          throw EngineError("inductive counterexample at k=" + std::to_string(k)
                            + " fails replay (" + rv.clause + "): " + rv.reason);
        }
      }
      for (const auto &t : report_.targets) {
        if (states_equal(t.first_state, suffix.states.front())) {
          return false;
        }
      }
      Target t;
      t.id = static_cast<int>(report_.targets.size());
      t.first_state = suffix.states.front();
      t.suffix = std::move(suffix);
      t.born_at_k = k;
      report_.targets.push_back(t);
      ++iter_->targets_added;
      *fresh = std::move(t);
    }
    return false;
  }

  bool proved(ProofSource src)
  {
    report_.outcome = Outcome::Correct;
    report_.proof_source = src;
    return true;
  }

  bool bug_from(const Query &q, const Model &m)
  {
    DecodedResult d = decode(q, m);
    Trace w = std::move(d.trace);
    if (d.target_id) {
      const Target &t = report_.targets.at(static_cast<size_t>(*d.target_id));
      w = stitch(w, t);
      report_.matched_target = t.id;
    }
    if (report_.config.validate_witness) {
      auto rv = replay_trace(sys_, w);
      if (!rv) {
        throw EngineError("witness fails replay (" + rv.clause + "): " + rv.reason);
      }
    }
    report_.outcome = Outcome::BugFound;
    report_.witness = std::move(w);
    return true;
  }

  DecodedResult decode(const Query &q, const Model &m)
  {
    try {
      return decode_model(sys_, q, m);
    } catch (const ProtocolError &e) {
      throw EngineError(std::string("solver model unusable: ") + e.what());
    }
  }

  SolverVerdict ask(const Query &q, bool targets_only)
  {
    const auto t0 = Clock::now();
    SolverVerdict v = solver_->check(q);
    iter_->queries.push_back({q.kind, targets_only, v.status, ms_since(t0), v.diagnostic});
    if (report_.config.on_query) {
      report_.config.on_query(q, v);
    }
    if (v.failed) {
      throw EngineError(to_string(q.kind) + " query at k=" + std::to_string(q.depth)
                        + " aborted: " + v.diagnostic);
    }
    if (v.status == SolverStatus::Unknown) {
      report_.inconclusive = true;
      report_.warnings.push_back("k=" + std::to_string(q.depth) + ": " + to_string(q.kind)
                                 + " inconclusive (" + v.diagnostic + ")");
    }
    return v;
  }

  void lint_halt_sink()
  {
    const Query q = encode_halt_sink_check(sys_);
    SolverVerdict v = solver_->check(q);
    if (report_.config.on_query) {
      report_.config.on_query(q, v);
    }
    if (v.status == SolverStatus::Sat) {
      report_.warnings.push_back(
          "halt states are not sinks; a forward-condition proof only covers "
          "executions up to their first halt state");
    }
  }

  const TransitionSystem &sys_;
  std::unique_ptr<Solver> solver_;
  VerificationReport report_;
  IterationStats *iter_ = nullptr;
  /// a base-case query was Unknown, so a bug of that depth may be missed
  bool tainted_ = false;
};

}  // namespace

VerificationReport run_plain(const TransitionSystem &sys, const EngineConfig &cfg)
{
  EngineConfig c = cfg;
  c.mode = EngineMode::Plain;
  return Driver(sys, c).run();
}

VerificationReport run_extended(const TransitionSystem &sys, const EngineConfig &cfg)
{
  EngineConfig c = cfg;
  c.mode = EngineMode::Extended;
  return Driver(sys, c).run();
}

VerificationReport run(const TransitionSystem &sys, const EngineConfig &cfg)
{
  return cfg.mode == EngineMode::Plain ? run_plain(sys, cfg) : run_extended(sys, cfg);
}

int Comparison::k_delta() const
{
  return static_cast<int>(plain.final_k) - static_cast<int>(extended.final_k);
}

double Comparison::time_ratio() const
{
  const double e = extended.time_ms();
  return e > 0 ? plain.time_ms() / e : 0.0;
}

bool Comparison::outcomes_agree() const
{
  auto decided = [](Outcome o) { return o != Outcome::BoundExhausted; };
  if (!decided(plain.outcome) || !decided(extended.outcome)) {
    return true;
  }
  return plain.outcome == extended.outcome;
}

Comparison compare(const TransitionSystem &sys, const EngineConfig &base,
                   const Runner &runner)
{
  EngineConfig pc = base;
  pc.mode = EngineMode::Plain;
  EngineConfig ec = base;
  ec.mode = EngineMode::Extended;
  auto plain = std::async(std::launch::async, [&] { return runner(sys, pc); });
  Comparison c;
  c.extended = runner(sys, ec);
  c.plain = plain.get();
  if (!c.outcomes_agree()) {
    throw DiscrepancyError("plain mode reports " + to_string(c.plain.outcome)
                               + " but extended mode reports "
                               + to_string(c.extended.outcome),
                           std::move(c));
  }
  return c;
}

}  // namespace kindmc
