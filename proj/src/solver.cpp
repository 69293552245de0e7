#include "kindmc/solver.h"

#include "kindmc/sexpr.h"
#include "kindmc/trace.h"

namespace kindmc {

std::string to_string(SolverStatus s)
{
  switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
  }
  return "?";
}

void SolverConfig::validate() const
{
  if (backend == BackendKind::External && command.empty()) {
    throw ConfigError("external solver selected but no command given "
                      "(use --solver external:<cmd> or set KINDMC_SOLVER)");
  }
  if (enumerator_bit_cap == 0 || enumerator_bit_cap > 30) {
    throw ConfigError("enumerator bit cap must be in 1..30, got "
                      + std::to_string(enumerator_bit_cap));
  }
}

SolverConfig resolve_solver_config(const std::optional<std::string> &flag,
                                   const char *env_command)
{
  SolverConfig cfg;
  const std::string env = env_command ? env_command : "";
  if (!flag) {
    if (!env.empty()) {
      cfg.backend = BackendKind::External;
      cfg.command = env;
    }
    return cfg;
  }
  const std::string &f = *flag;
  if (f == "enum" || f == "enumerator") {
    return cfg;
  }
  const std::string prefix = "external";
  if (f.rfind(prefix, 0) == 0) {
    cfg.backend = BackendKind::External;
    if (f.size() == prefix.size()) {
      cfg.command = env;
    } else if (f[prefix.size()] == ':') {
      cfg.command = f.substr(prefix.size() + 1);
    } else {
      throw ConfigError("unknown solver '" + f + "'");
    }
    cfg.validate();
    return cfg;
  }
  throw ConfigError("unknown solver '" + f + "' (expected enum or external:<cmd>)");
}

std::unique_ptr<Solver> make_solver(const SolverConfig &cfg)
{
  cfg.validate();
  if (cfg.backend == BackendKind::External) {
    return std::make_unique<ExternalSolver>(cfg);
  }
  return std::make_unique<EnumeratorSolver>(cfg);
}

SolverVerdict check(const Query &q, const SolverConfig &cfg)
{
  return make_solver(cfg)->check(q);
}

namespace {

uint64_t parse_value(const SExpr &v, const Sort &sort, const std::string &name)
{
  auto bad = [&] {
    return ProtocolError("unparseable value for " + name + ": " + v.to_string());
  };
  if (v.is_atom) {
    const std::string &a = v.atom;
    if (sort.is_bool()) {
      if (a == "true") {
        return 1;
      }
      if (a == "false") {
        return 0;
      }
      throw bad();
    }
    unsigned base = 0;
    if (a.rfind("#b", 0) == 0) {
      base = 2;
      if (a.size() - 2 != sort.width) {
        throw bad();
      }
    } else if (a.rfind("#x", 0) == 0) {
      base = 16;
      if ((a.size() - 2) * 4 != sort.width) {
        throw bad();
      }
    } else {
      throw bad();
    }
    try {
      size_t used = 0;
      uint64_t val = std::stoull(a.substr(2), &used, base);
      if (used != a.size() - 2) {
        throw bad();
      }
      return val;
    } catch (const std::logic_error &) {
      throw bad();
    }
  }
  // (_ bvN W)
  if (v.items.size() == 3 && v.items[0].is("_") && v.items[1].is_atom
      && v.items[1].atom.rfind("bv", 0) == 0 && v.items[2].is_atom && sort.is_bv()) {
    try {
      if (std::stoul(v.items[2].atom) != sort.width) {
        throw bad();
      }
      return std::stoull(v.items[1].atom.substr(2)) & sort.mask();
    } catch (const std::logic_error &) {
      throw bad();
    }
  }
  throw bad();
}

}  // namespace

Model parse_get_value(const std::string &text, const Query &q)
{
  std::vector<SExpr> top;
  try {
    top = read_sexprs(text, "solver");
  } catch (const ParseError &e) {
    throw ProtocolError(std::string("malformed get-value response: ") + e.what());
  }
  if (top.size() != 1 || top[0].is_atom) {
    throw ProtocolError("expected one parenthesized get-value response, got: " + text);
  }
  std::map<std::string, Sort> sorts;
  for (const auto &d : q.decls) {
    sorts.emplace(d.name(), d.sort);
  }
  for (const auto &m : q.markers) {
    sorts.emplace(m.name, Sort::boolean());
  }
  Model model;
  for (const auto &pair : top[0].items) {
    if (pair.is_atom || pair.items.size() != 2 || !pair.items[0].is_atom) {
      throw ProtocolError("malformed get-value entry: " + pair.to_string());
    }
    const std::string &name = pair.items[0].atom;
    auto it = sorts.find(name);
    if (it == sorts.end()) {
      throw ProtocolError("get-value returned undeclared name " + name);
    }
    model[name] = parse_value(pair.items[1], it->second, name);
  }
  for (const auto &[name, sort] : sorts) {
    if (!model.count(name)) {
      throw ProtocolError("get-value response lacks a binding for " + name);
    }
  }
  return model;
}

namespace {

uint64_t lookup(const Model &m, const std::string &name)
{
  auto it = m.find(name);
  if (it == m.end()) {
    throw ProtocolError("model lacks a binding for " + name);
  }
  return it->second;
}

Trace trace_prefix(const TransitionSystem &sys, const Model &m, unsigned len)
{
  Trace t;
  for (unsigned step = 1; step <= len; ++step) {
    State s;
    for (const auto &v : sys.vars) {
      if (v.role == VarRole::State) {
        s.bindings[v.name] = lookup(m, v.name + "@" + std::to_string(step));
      }
    }
    t.states.push_back(std::move(s));
    if (step < len) {
      Valuation in;
      for (const auto &v : sys.vars) {
        if (v.role == VarRole::Input) {
          in[v.name] = lookup(m, v.name + "@" + std::to_string(step));
        }
      }
      t.inputs.push_back(std::move(in));
    }
  }
  return t;
}

}  // namespace

DecodedResult decode_model(const TransitionSystem &sys, const Query &q,
                           const Model &model)
{
  DecodedResult r;
  if (q.kind == QueryKind::BaseCase || q.kind == QueryKind::ExtendedBaseCase) {
    for (size_t i = 0; i < q.markers.size(); ++i) {
      const Marker &m = q.markers[i];
      if (!lookup(model, m.name)) {
        continue;
      }
      if (!r.marker) {
        r.marker = i;
        continue;
      }
      const Marker &best = q.markers[*r.marker];
      auto rank = [](const Marker &x) {
        return std::make_tuple(x.depth, x.target_id.has_value(), x.target_id.value_or(0));
      };
      if (rank(m) < rank(best)) {
        r.marker = i;
      }
    }
    if (!r.marker) {
      throw ProtocolError("satisfying model fires no marker");
    }
    const Marker &m = q.markers[*r.marker];
    r.depth = m.depth;
    r.target_id = m.target_id;
    r.trace = trace_prefix(sys, model, m.depth);
    if (!m.target_id) {
      r.trace.violated_prop = first_violated_prop(sys, r.trace.states.back());
    }
    return r;
  }
  r.depth = q.depth;
  r.trace = trace_prefix(sys, model, q.depth);
  if (q.kind == QueryKind::InductiveStep) {
    r.trace.violated_prop = first_violated_prop(sys, r.trace.states.back());
  }
  return r;
}

}  // namespace kindmc
