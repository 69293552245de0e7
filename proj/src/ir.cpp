#include "kindmc/ir.h"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

namespace kindmc {

Sort Sort::bitvec(unsigned width)
{
  if (width < 1 || width > 64) {
    throw SortError("bit-vector width must be in 1..64, got "
                    + std::to_string(width));
  }
  return {SortKind::BitVec, width};
}

uint64_t Sort::mask() const
{
  unsigned b = bits();
  return b >= 64 ? ~uint64_t{0} : ((uint64_t{1} << b) - 1);
}

std::string Sort::to_string() const
{
  if (is_bool()) {
    return "bool";
  }
  return "(bv " + std::to_string(width) + ")";
}

bool is_identifier(std::string_view s)
{
  if (s.empty()) {
    return false;
  }
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(s[0])) {
    return false;
  }
  return std::all_of(s.begin() + 1, s.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9');
  });
}

namespace {

struct OpInfo
{
  Op op;
  std::string_view name;
};

constexpr std::array<OpInfo, 18> kOpNames{{
    {Op::Not, "not"},     {Op::And, "and"},       {Op::Or, "or"},
    {Op::Implies, "implies"}, {Op::Iff, "iff"},   {Op::Ite, "ite"},
    {Op::Eq, "="},        {Op::BvAdd, "bvadd"},   {Op::BvSub, "bvsub"},
    {Op::BvMul, "bvmul"}, {Op::BvAnd, "bvand"},   {Op::BvOr, "bvor"},
    {Op::BvXor, "bvxor"}, {Op::BvNot, "bvnot"},   {Op::BvUle, "bvule"},
    {Op::BvUlt, "bvult"}, {Op::BvUge, "bvuge"},   {Op::BvUgt, "bvugt"},
}};

std::string describe(const Expr &e)
{
  if (!e) {
    return "<null>";
  }
  switch (e->op) {
    case Op::Const: return "constant of sort " + e->sort.to_string();
    case Op::Var: return "'" + e->name + "'";
    case Op::Next: return "(next " + e->name + ")";
    default: return "(" + std::string(op_name(e->op)) + " ...)";
  }
}

void require(bool cond, const std::string &msg)
{
  if (!cond) {
    throw SortError(msg);
  }
}

void require_bool(Op op, const Expr &e)
{
  require(e && e->sort.is_bool(),
          std::string(op_name(op)) + ": expected bool operand, got "
              + describe(e) + " of sort "
              + (e ? e->sort.to_string() : "?"));
}

void require_arity(Op op, const std::vector<Expr> &kids, size_t n)
{
  require(kids.size() == n,
          std::string(op_name(op)) + ": expected " + std::to_string(n)
              + " operands, got " + std::to_string(kids.size()));
}

Expr make_node(Op op, Sort sort, std::vector<Expr> kids)
{
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->sort = sort;
  n->kids = std::move(kids);
  return n;
}

}  // namespace

std::string_view op_name(Op op)
{
  for (const auto &info : kOpNames) {
    if (info.op == op) {
      return info.name;
    }
  }
  return "";
}

std::optional<Op> op_from_name(std::string_view name)
{
  for (const auto &info : kOpNames) {
    if (info.name == name) {
      return info.op;
    }
  }
  return std::nullopt;
}

Expr mk_bool(bool b) { return mk_const(b ? 1 : 0, Sort::boolean()); }
Expr mk_true() { return mk_bool(true); }
Expr mk_false() { return mk_bool(false); }
Expr mk_bv(uint64_t value, unsigned width)
{
  return mk_const(value, Sort::bitvec(width));
}

Expr mk_const(uint64_t value, Sort sort)
{
  if ((value & ~sort.mask()) != 0) {
    throw SortError("constant " + std::to_string(value)
                    + " does not fit sort " + sort.to_string());
  }
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->sort = sort;
  n->value = value;
  return n;
}

Expr mk_var(std::string name, Sort sort)
{
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  n->sort = sort;
  n->name = std::move(name);
  return n;
}

Expr mk_next(std::string name, Sort sort)
{
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Next;
  n->sort = sort;
  n->name = std::move(name);
  return n;
}

Expr mk_app(Op op, std::vector<Expr> kids)
{
  for (const auto &k : kids) {
    require(k != nullptr, std::string(op_name(op)) + ": null operand");
  }
  switch (op) {
    case Op::Const:
    case Op::Var:
    case Op::Next:
      throw InternalError("mk_app called with a leaf operator");
    case Op::Not:
      require_arity(op, kids, 1);
      require_bool(op, kids[0]);
      return make_node(op, Sort::boolean(), std::move(kids));
    case Op::And:
    case Op::Or:
      for (const auto &k : kids) {
        require_bool(op, k);
      }
      return make_node(op, Sort::boolean(), std::move(kids));
    case Op::Implies:
    case Op::Iff:
      require_arity(op, kids, 2);
      require_bool(op, kids[0]);
      require_bool(op, kids[1]);
      return make_node(op, Sort::boolean(), std::move(kids));
    case Op::Ite: {
      require_arity(op, kids, 3);
      require_bool(op, kids[0]);
      require(kids[1]->sort == kids[2]->sort,
              "ite: branch sorts differ: " + kids[1]->sort.to_string()
                  + " vs " + kids[2]->sort.to_string());
      Sort s = kids[1]->sort;
      return make_node(op, s, std::move(kids));
    }
    case Op::Eq:
      require_arity(op, kids, 2);
      require(kids[0]->sort == kids[1]->sort,
              "=: cannot compare " + describe(kids[0]) + " of sort "
                  + kids[0]->sort.to_string() + " with " + describe(kids[1])
                  + " of sort " + kids[1]->sort.to_string());
      return make_node(op, Sort::boolean(), std::move(kids));
    case Op::BvNot:
      require_arity(op, kids, 1);
      require(kids[0]->sort.is_bv(),
              "bvnot: expected bit-vector operand, got sort "
                  + kids[0]->sort.to_string());
      {
        Sort s = kids[0]->sort;
        return make_node(op, s, std::move(kids));
      }
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvMul:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvUle:
    case Op::BvUlt:
    case Op::BvUge:
    case Op::BvUgt: {
      require_arity(op, kids, 2);
      for (const auto &k : kids) {
        require(k->sort.is_bv(),
                std::string(op_name(op)) + ": expected bit-vector operand, got "
                    + describe(k) + " of sort " + k->sort.to_string());
      }
      require(kids[0]->sort == kids[1]->sort,
              std::string(op_name(op)) + ": operand widths differ: "
                  + kids[0]->sort.to_string() + " vs "
                  + kids[1]->sort.to_string());
      bool cmp = op == Op::BvUle || op == Op::BvUlt || op == Op::BvUge
                 || op == Op::BvUgt;
      Sort s = cmp ? Sort::boolean() : kids[0]->sort;
      return make_node(op, s, std::move(kids));
    }
  }
  throw InternalError("unhandled operator");
}

Expr mk_not(Expr e) { return mk_app(Op::Not, {std::move(e)}); }
Expr mk_and(std::vector<Expr> kids) { return mk_app(Op::And, std::move(kids)); }
Expr mk_or(std::vector<Expr> kids) { return mk_app(Op::Or, std::move(kids)); }
Expr mk_implies(Expr a, Expr b)
{
  return mk_app(Op::Implies, {std::move(a), std::move(b)});
}
Expr mk_eq(Expr a, Expr b) { return mk_app(Op::Eq, {std::move(a), std::move(b)}); }
Expr mk_ite(Expr c, Expr t, Expr e)
{
  return mk_app(Op::Ite, {std::move(c), std::move(t), std::move(e)});
}

bool structurally_equal(const Expr &a, const Expr &b)
{
  if (a == b) {
    return true;
  }
  if (!a || !b) {
    return false;
  }
  if (a->op != b->op || a->sort != b->sort || a->value != b->value
      || a->name != b->name || a->kids.size() != b->kids.size()) {
    return false;
  }
  for (size_t i = 0; i < a->kids.size(); ++i) {
    if (!structurally_equal(a->kids[i], b->kids[i])) {
      return false;
    }
  }
  return true;
}

std::vector<VarDecl> TransitionSystem::state_vars() const
{
  std::vector<VarDecl> out;
  for (const auto &v : vars) {
    if (v.role == VarRole::State) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<VarDecl> TransitionSystem::input_vars() const
{
  std::vector<VarDecl> out;
  for (const auto &v : vars) {
    if (v.role == VarRole::Input) {
      out.push_back(v);
    }
  }
  return out;
}

const VarDecl *TransitionSystem::find(std::string_view name) const
{
  for (const auto &v : vars) {
    if (v.name == name) {
      return &v;
    }
  }
  return nullptr;
}

unsigned TransitionSystem::state_bits() const
{
  unsigned n = 0;
  for (const auto &v : vars) {
    if (v.role == VarRole::State) {
      n += v.sort.bits();
    }
  }
  return n;
}

unsigned TransitionSystem::input_bits() const
{
  unsigned n = 0;
  for (const auto &v : vars) {
    if (v.role == VarRole::Input) {
      n += v.sort.bits();
    }
  }
  return n;
}

Expr TransitionSystem::all_props() const
{
  if (props.size() == 1) {
    return props[0].expr;
  }
  std::vector<Expr> kids;
  for (const auto &p : props) {
    kids.push_back(p.expr);
  }
  return mk_and(std::move(kids));
}

namespace {

struct SectionRules
{
  std::string section;
  bool allow_next;
  bool allow_inputs;
};

void check_formula(const TransitionSystem &sys, const Expr &e,
                   const SectionRules &rules)
{
  if (!e) {
    throw ValidationError("missing " + rules.section + " formula");
  }
  switch (e->op) {
    case Op::Const: return;
    case Op::Var:
    case Op::Next: {
      const VarDecl *d = sys.find(e->name);
      if (!d) {
        throw ValidationError("undeclared variable '" + e->name + "' in "
                              + rules.section);
      }
      if (d->sort != e->sort) {
        throw ValidationError("variable '" + e->name + "' used with sort "
                              + e->sort.to_string() + " but declared "
                              + d->sort.to_string());
      }
      if (e->op == Op::Next) {
        if (!rules.allow_next) {
          throw ValidationError("next(" + e->name + ") outside trans (in "
                                + rules.section + ")");
        }
        if (d->role != VarRole::State) {
          throw ValidationError("next(" + e->name
                                + ") references an input variable");
        }
      }
      if (d->role == VarRole::Input && !rules.allow_inputs) {
        throw ValidationError("input variable '" + e->name
                              + "' used outside trans (in " + rules.section
                              + ")");
      }
      return;
    }
    default:
      for (const auto &k : e->kids) {
        check_formula(sys, k, rules);
      }
  }
}

}  // namespace

void TransitionSystem::validate() const
{
  std::set<std::string> names;
  for (const auto &v : vars) {
    if (!is_identifier(v.name)) {
      throw ValidationError("invalid identifier '" + v.name + "'");
    }
    if (!names.insert(v.name).second) {
      throw ValidationError("duplicate declaration of '" + v.name + "'");
    }
    if (v.sort.is_bv() && (v.sort.width < 1 || v.sort.width > 64)) {
      throw ValidationError("variable '" + v.name + "' has invalid width");
    }
  }
  if (props.empty()) {
    throw ValidationError("system has no properties");
  }
  auto check_bool = [](const Expr &e, const std::string &section) {
    if (!e) {
      throw ValidationError("missing " + section + " section");
    }
    if (!e->sort.is_bool()) {
      throw ValidationError(section + " must be boolean, got sort "
                            + e->sort.to_string());
    }
  };
  check_bool(init, "init");
  check_bool(trans, "trans");
  check_bool(halt, "halt");
  check_formula(*this, init, {"init", false, false});
  check_formula(*this, trans, {"trans", true, true});
  check_formula(*this, halt, {"halt", false, false});
  std::set<std::string> prop_names;
  for (const auto &p : props) {
    if (!prop_names.insert(p.name).second) {
      throw ValidationError("duplicate property name '" + p.name + "'");
    }
    check_bool(p.expr, "prop " + p.name);
    check_formula(*this, p.expr, {"prop " + p.name, false, false});
  }
}

uint64_t State::at(const std::string &name) const
{
  auto it = bindings.find(name);
  if (it == bindings.end()) {
    throw InternalError("state has no binding for '" + name + "'");
  }
  return it->second;
}

std::string to_string(const State &s)
{
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto &[name, value] : s.bindings) {
    os << (first ? "" : ", ") << name << "=" << value;
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace kindmc
