#include "kindmc/trace.h"

#include "kindmc/eval.h"

namespace kindmc {

namespace {

ReplayVerdict fail(std::optional<size_t> index, std::string clause,
                   std::string reason)
{
  ReplayVerdict v;
  v.valid = false;
  v.index = index;
  v.clause = std::move(clause);
  v.reason = std::move(reason);
  return v;
}

std::optional<std::string> check_binding(const std::vector<VarDecl> &decls,
                                         const Valuation &val,
                                         const std::string &what)
{
  if (val.size() != decls.size()) {
    return what + " binds " + std::to_string(val.size())
           + " variables, expected " + std::to_string(decls.size());
  }
  for (const auto &d : decls) {
    auto it = val.find(d.name);
    if (it == val.end()) {
      return what + " has no value for '" + d.name + "'";
    }
    if ((it->second & ~d.sort.mask()) != 0) {
      return what + " value of '" + d.name + "' exceeds its sort";
    }
  }
  return std::nullopt;
}

}  // namespace

ReplayVerdict replay_trace(const TransitionSystem &sys,
                           const Trace &t,
                           const ReplayOptions &opts)
{
  if (t.states.empty()) {
    return fail(std::nullopt, "structure", "trace has no states");
  }
  if (t.inputs.size() + 1 != t.states.size()) {
    return fail(std::nullopt, "structure",
                "trace has " + std::to_string(t.states.size()) + " states but "
                    + std::to_string(t.inputs.size()) + " input steps");
  }
  const auto svars = sys.state_vars();
  const auto ivars = sys.input_vars();
  for (size_t i = 0; i < t.states.size(); ++i) {
    if (auto err = check_binding(svars, t.states[i].bindings,
                                 "state " + std::to_string(i))) {
      return fail(i, "structure", *err);
    }
  }
  for (size_t i = 0; i < t.inputs.size(); ++i) {
    if (auto err = check_binding(ivars, t.inputs[i],
                                 "input step " + std::to_string(i))) {
      return fail(i, "structure", *err);
    }
  }
  if (opts.check_init && eval_expr(sys.init, t.states[0]) == 0) {
    return fail(0, "init", "initial condition does not hold at state 0");
  }
  for (size_t j = 0; j + 1 < t.states.size(); ++j) {
    if (eval_expr(sys.trans, t.states[j], t.inputs[j], &t.states[j + 1]) == 0) {
      return fail(j, "trans",
                  "transition relation fails between states "
                      + std::to_string(j) + " and " + std::to_string(j + 1));
    }
  }
  if (t.violated_prop) {
    const NamedProp *prop = nullptr;
    for (const auto &p : sys.props) {
      if (p.name == *t.violated_prop) {
        prop = &p;
      }
    }
    if (!prop) {
      return fail(std::nullopt, "prop",
                  "unknown property '" + *t.violated_prop + "'");
    }
    size_t last = t.states.size() - 1;
    if (eval_expr(prop->expr, t.states[last]) != 0) {
      return fail(last, "prop",
                  "property '" + prop->name + "' holds at the final state");
    }
  }
  ReplayVerdict ok;
  ok.valid = true;
  return ok;
}

bool states_equal(const State &a, const State &b)
{
  if (a.bindings.size() != b.bindings.size()) {
    throw InternalError("states_equal: states bind different variable sets");
  }
  bool equal = true;
  auto ib = b.bindings.begin();
  for (auto ia = a.bindings.begin(); ia != a.bindings.end(); ++ia, ++ib) {
    if (ia->first != ib->first) {
      throw InternalError("states_equal: states bind different variable sets");
    }
    if (ia->second != ib->second) {
      equal = false;
    }
  }
  return equal;
}

std::optional<std::string> first_violated_prop(const TransitionSystem &sys,
                                               const State &s)
{
  for (const auto &p : sys.props) {
    if (eval_expr(p.expr, s) == 0) {
      return p.name;
    }
  }
  return std::nullopt;
}

}  // namespace kindmc
