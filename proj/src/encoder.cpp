#include "kindmc/encoder.h"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace kindmc {

std::string to_string(QueryKind k)
{
  switch (k) {
    case QueryKind::BaseCase: return "base-case";
    case QueryKind::ForwardCondition: return "forward-condition";
    case QueryKind::InductiveStep: return "inductive-step";
    case QueryKind::ExtendedBaseCase: return "extended-base-case";
    case QueryKind::HaltSink: return "halt-sink";
  }
  return "?";
}

Expr Query::full_formula() const
{
  std::vector<Expr> kids;
  for (const auto &m : markers) {
    kids.push_back(mk_eq(mk_var(m.name, Sort::boolean()), m.definition));
  }
  kids.push_back(assertion);
  return kids.size() == 1 ? kids[0] : mk_and(std::move(kids));
}

const TimedVar *Query::find_decl(const std::string &name) const
{
  for (const auto &d : decls) {
    if (d.name() == name) {
      return &d;
    }
  }
  return nullptr;
}

namespace {

Expr rename(const Expr &e, unsigned step,
            std::unordered_map<const ExprNode *, Expr> &memo)
{
  auto it = memo.find(e.get());
  if (it != memo.end()) {
    return it->second;
  }
  Expr out;
  switch (e->op) {
    case Op::Const: out = e; break;
    case Op::Var:
      out = mk_var(e->name + "@" + std::to_string(step), e->sort);
      break;
    case Op::Next:
      out = mk_var(e->name + "@" + std::to_string(step + 1), e->sort);
      break;
    default: {
      std::vector<Expr> kids;
      kids.reserve(e->kids.size());
      for (const auto &k : e->kids) {
        kids.push_back(rename(k, step, memo));
      }
      out = mk_app(e->op, std::move(kids));
    }
  }
  memo.emplace(e.get(), out);
  return out;
}

void require_depth(unsigned k)
{
  if (k < 1) {
    throw std::invalid_argument("unrolling depth must be at least 1");
  }
}

std::vector<TimedVar> unrolled_decls(const TransitionSystem &sys, unsigned k)
{
  std::vector<TimedVar> decls;
  for (unsigned step = 1; step <= k; ++step) {
    for (const auto &v : sys.vars) {
      if (v.role == VarRole::State) {
        decls.push_back({v.name, step, v.sort, v.role});
      }
    }
    if (step < k) {
      for (const auto &v : sys.vars) {
        if (v.role == VarRole::Input) {
          decls.push_back({v.name, step, v.sort, v.role});
        }
      }
    }
  }
  return decls;
}

/// T(s_j, s_{j+1}) for j = 1..k-1, index j-1
std::vector<Expr> unrolled_trans(const TransitionSystem &sys, unsigned k)
{
  std::vector<Expr> out;
  for (unsigned j = 1; j < k; ++j) {
    out.push_back(timed(sys.trans, j));
  }
  return out;
}

Expr conj(std::vector<Expr> kids)
{
  if (kids.empty()) {
    return mk_true();
  }
  if (kids.size() == 1) {
    return kids[0];
  }
  return mk_and(std::move(kids));
}

Expr disj(std::vector<Expr> kids)
{
  if (kids.empty()) {
    return mk_false();
  }
  if (kids.size() == 1) {
    return kids[0];
  }
  return mk_or(std::move(kids));
}

Expr untimed_match(const TransitionSystem &sys, const State &s)
{
  std::vector<Expr> eqs;
  for (const auto &v : sys.vars) {
    if (v.role == VarRole::State) {
      eqs.push_back(mk_eq(mk_var(v.name, v.sort), mk_const(s.at(v.name), v.sort)));
    }
  }
  return conj(std::move(eqs));
}

Unrolling make_unrolling(const TransitionSystem &sys, unsigned k, bool with_init,
                         bool any_depth)
{
  Unrolling u;
  u.vars = sys.vars;
  u.init = with_init ? sys.init : nullptr;
  u.trans = sys.trans;
  u.any_depth = any_depth;
  u.assume.assign(k, nullptr);
  u.goals.assign(k, {});
  return u;
}

/** Shared construction for B(k) and B'(k): one marker per enabled disjunct,
 *  main assertion I(s1) & OR markers. */
Query base_case_query(const TransitionSystem &sys, unsigned k, QueryKind kind,
                      std::span<const Target> targets, bool include_violations)
{
  require_depth(k);
  Query q;
  q.kind = kind;
  q.depth = k;
  q.decls = unrolled_decls(sys, k);
  Unrolling u = make_unrolling(sys, k, true, true);
  const auto trans = unrolled_trans(sys, k);
  const Expr bad = mk_not(sys.all_props());

  std::vector<Expr> fired;
  std::vector<Expr> path;
  for (unsigned i = 1; i <= k; ++i) {
    if (i > 1) {
      path.push_back(trans[i - 2]);
    }
    auto with_path = [&](Expr cond) {
      std::vector<Expr> kids = path;
      kids.push_back(std::move(cond));
      return conj(std::move(kids));
    };
    if (include_violations) {
      Marker m{"$viol@" + std::to_string(i), i, std::nullopt,
               with_path(timed(bad, i))};
      u.goals[i - 1].push_back({q.markers.size(), bad});
      fired.push_back(mk_var(m.name, Sort::boolean()));
      q.markers.push_back(std::move(m));
    }
    for (const auto &t : targets) {
      Marker m{"$tgt" + std::to_string(t.id) + "@" + std::to_string(i), i, t.id,
               with_path(state_match(sys, t.first_state, i))};
      u.goals[i - 1].push_back({q.markers.size(), untimed_match(sys, t.first_state)});
      fired.push_back(mk_var(m.name, Sort::boolean()));
      q.markers.push_back(std::move(m));
    }
  }
  q.assertion = conj({timed(sys.init, 1), disj(std::move(fired))});
  q.unrolling = std::move(u);
  return q;
}

}  // namespace

Expr timed(const Expr &e, unsigned step)
{
  std::unordered_map<const ExprNode *, Expr> memo;
  return rename(e, step, memo);
}

Expr state_match(const TransitionSystem &sys, const State &s, unsigned step)
{
  return timed(untimed_match(sys, s), step);
}

Query encode_base_case(const TransitionSystem &sys, unsigned k)
{
  return base_case_query(sys, k, QueryKind::BaseCase, {}, true);
}

Query encode_extended_base_case(const TransitionSystem &sys, unsigned k,
                                std::span<const Target> targets,
                                bool targets_only)
{
  return base_case_query(sys, k, QueryKind::ExtendedBaseCase, targets,
                         !targets_only);
}

Query encode_forward_condition(const TransitionSystem &sys, unsigned k)
{
  require_depth(k);
  Query q;
  q.kind = QueryKind::ForwardCondition;
  q.depth = k;
  q.decls = unrolled_decls(sys, k);
  std::vector<Expr> kids{timed(sys.init, 1)};
  for (auto &t : unrolled_trans(sys, k)) {
    kids.push_back(std::move(t));
  }
  const Expr not_halt = mk_not(sys.halt);
  kids.push_back(timed(not_halt, k));
  q.assertion = conj(std::move(kids));
  Unrolling u = make_unrolling(sys, k, true, false);
  u.goals[k - 1].push_back({kNoMarker, not_halt});
  q.unrolling = std::move(u);
  return q;
}

Query encode_inductive_step(const TransitionSystem &sys, unsigned k)
{
  require_depth(k);
  Query q;
  q.kind = QueryKind::InductiveStep;
  q.depth = k;
  q.decls = unrolled_decls(sys, k);
  const Expr phi = sys.all_props();
  std::vector<Expr> kids = unrolled_trans(sys, k);
  for (unsigned i = 1; i < k; ++i) {
    kids.push_back(timed(phi, i));
  }
  kids.push_back(timed(mk_not(phi), k));
  q.assertion = conj(std::move(kids));
  Unrolling u = make_unrolling(sys, k, false, false);
  for (unsigned i = 1; i < k; ++i) {
    u.assume[i - 1] = phi;
  }
  u.goals[k - 1].push_back({kNoMarker, mk_not(phi)});
  q.unrolling = std::move(u);
  return q;
}

Query encode_halt_sink_check(const TransitionSystem &sys)
{
  Query q;
  q.kind = QueryKind::HaltSink;
  q.depth = 2;
  q.decls = unrolled_decls(sys, 2);
  const Expr not_halt = mk_not(sys.halt);
  q.assertion = conj({timed(sys.halt, 1), timed(sys.trans, 1), timed(not_halt, 2)});
  Unrolling u = make_unrolling(sys, 2, false, false);
  u.assume[0] = sys.halt;
  u.goals[1].push_back({kNoMarker, not_halt});
  q.unrolling = std::move(u);
  return q;
}

std::string to_smtlib(const Sort &s)
{
  if (s.is_bool()) {
    return "Bool";
  }
  return "(_ BitVec " + std::to_string(s.width) + ")";
}

namespace {

void write_smt(std::ostream &os, const Expr &e)
{
  switch (e->op) {
    case Op::Const:
      if (e->sort.is_bool()) {
        os << (e->value ? "true" : "false");
      } else {
        os << "#b";
        for (int i = static_cast<int>(e->sort.width) - 1; i >= 0; --i) {
          os << (((e->value >> i) & 1) ? '1' : '0');
        }
      }
      return;
    case Op::Var: os << e->name; return;
    case Op::Next:
      throw InternalError("next() cannot be serialized; unroll with timed() first");
    case Op::And:
    case Op::Or:
      if (e->kids.empty()) {
        os << (e->op == Op::And ? "true" : "false");
        return;
      }
      if (e->kids.size() == 1) {
        write_smt(os, e->kids[0]);
        return;
      }
      break;
    default: break;
  }
  std::string_view name = op_name(e->op);
  if (e->op == Op::Implies) {
    name = "=>";
  } else if (e->op == Op::Iff) {
    name = "=";
  }
  os << "(" << name;
  for (const auto &k : e->kids) {
    os << " ";
    write_smt(os, k);
  }
  os << ")";
}

}  // namespace

std::string to_smtlib(const Expr &e)
{
  std::ostringstream os;
  write_smt(os, e);
  return os.str();
}

std::vector<std::string> model_names(const Query &q)
{
  std::vector<std::string> out;
  for (const auto &d : q.decls) {
    out.push_back(d.name());
  }
  for (const auto &m : q.markers) {
    out.push_back(m.name);
  }
  return out;
}

std::string serialize_smtlib_check(const Query &q)
{
  std::ostringstream os;
  os << "; " << to_string(q.kind) << " k=" << q.depth << "\n";
  os << "(set-option :produce-models true)\n";
  os << "(set-logic QF_BV)\n";
  for (const auto &d : q.decls) {
    os << "(declare-const " << d.name() << " " << to_smtlib(d.sort) << ")\n";
  }
  for (const auto &m : q.markers) {
    os << "(declare-const " << m.name << " Bool)\n";
  }
  for (const auto &m : q.markers) {
    os << "(assert (= " << m.name << " ";
    write_smt(os, m.definition);
    os << "))\n";
  }
  os << "(assert ";
  write_smt(os, q.assertion);
  os << ")\n";
  os << "(check-sat)\n";
  return os.str();
}

std::string serialize_smtlib(const Query &q)
{
  std::string doc = serialize_smtlib_check(q);
  auto names = model_names(q);
  if (!names.empty()) {
    doc += "(get-value (";
    for (size_t i = 0; i < names.size(); ++i) {
      doc += (i ? " " : "") + names[i];
    }
    doc += "))\n";
  }
  return doc;
}

}  // namespace kindmc
