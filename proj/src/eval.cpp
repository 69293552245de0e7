#include "kindmc/eval.h"

#include <unordered_map>

namespace kindmc {

uint64_t apply_op(Op op, Sort operand_sort, std::span<const uint64_t> args)
{
  const uint64_t m = operand_sort.mask();
  switch (op) {
    case Op::Not: return args[0] ? 0 : 1;
    case Op::And:
      for (uint64_t v : args) {
        if (!v) {
          return 0;
        }
      }
      return 1;
    case Op::Or:
      for (uint64_t v : args) {
        if (v) {
          return 1;
        }
      }
      return 0;
    case Op::Implies: return (!args[0] || args[1]) ? 1 : 0;
    case Op::Iff: return ((args[0] != 0) == (args[1] != 0)) ? 1 : 0;
    case Op::Ite: return args[0] ? args[1] : args[2];
    case Op::Eq: return args[0] == args[1] ? 1 : 0;
    case Op::BvAdd: return (args[0] + args[1]) & m;
    case Op::BvSub: return (args[0] - args[1]) & m;
    case Op::BvMul: return (args[0] * args[1]) & m;
    case Op::BvAnd: return args[0] & args[1];
    case Op::BvOr: return args[0] | args[1];
    case Op::BvXor: return args[0] ^ args[1];
    case Op::BvNot: return ~args[0] & m;
    case Op::BvUle: return args[0] <= args[1] ? 1 : 0;
    case Op::BvUlt: return args[0] < args[1] ? 1 : 0;
    case Op::BvUge: return args[0] >= args[1] ? 1 : 0;
    case Op::BvUgt: return args[0] > args[1] ? 1 : 0;
    case Op::Const:
    case Op::Var:
    case Op::Next: break;
  }
  throw InternalError("apply_op on a leaf operator");
}

namespace {

uint64_t lookup(const Valuation &v, const std::string &name, bool &found)
{
  auto it = v.find(name);
  found = it != v.end();
  return found ? it->second : 0;
}

}  // namespace

uint64_t eval_expr(const Expr &e,
                   const Valuation &state,
                   const Valuation &inputs,
                   const Valuation *next_state)
{
  if (!e) {
    throw InternalError("eval_expr: null expression");
  }
  bool found = false;
  switch (e->op) {
    case Op::Const: return e->value;
    case Op::Var: {
      uint64_t v = lookup(state, e->name, found);
      if (!found) {
        v = lookup(inputs, e->name, found);
      }
      if (!found) {
        throw InternalError("eval_expr: unbound variable '" + e->name + "'");
      }
      if ((v & ~e->sort.mask()) != 0) {
        throw InternalError("eval_expr: value of '" + e->name
                            + "' does not fit its sort");
      }
      return v;
    }
    case Op::Next: {
      if (!next_state) {
        throw InternalError("eval_expr: next(" + e->name
                            + ") without a next state");
      }
      uint64_t v = lookup(*next_state, e->name, found);
      if (!found) {
        throw InternalError("eval_expr: unbound next(" + e->name + ")");
      }
      return v;
    }
    default: break;
  }
  std::vector<uint64_t> args;
  args.reserve(e->kids.size());
  for (const auto &k : e->kids) {
    args.push_back(eval_expr(k, state, inputs, next_state));
  }
  Sort operand_sort = e->kids.empty() ? Sort::boolean() : e->kids.back()->sort;
  return apply_op(e->op, operand_sort, args);
}

CompiledExpr::CompiledExpr(const Expr &e, const SlotResolver &slot_of)
{
  std::unordered_map<const ExprNode *, uint32_t> index;
  std::function<uint32_t(const Expr &)> emit = [&](const Expr &n) -> uint32_t {
    auto it = index.find(n.get());
    if (it != index.end()) {
      return it->second;
    }
    Instr ins;
    ins.op = n->op;
    ins.operand_sort = n->kids.empty() ? n->sort : n->kids.back()->sort;
    if (n->op == Op::Const) {
      ins.imm = n->value;
    } else if (n->op == Op::Var || n->op == Op::Next) {
      ins.imm = slot_of(*n);
    } else {
      std::vector<uint32_t> kid_ids;
      for (const auto &k : n->kids) {
        kid_ids.push_back(emit(k));
      }
      ins.first_arg = static_cast<uint32_t>(args_.size());
      ins.num_args = static_cast<uint32_t>(kid_ids.size());
      args_.insert(args_.end(), kid_ids.begin(), kid_ids.end());
    }
    code_.push_back(ins);
    uint32_t id = static_cast<uint32_t>(code_.size() - 1);
    index.emplace(n.get(), id);
    return id;
  };
  emit(e);
  val_.resize(code_.size());
  kn_.resize(code_.size());
}

std::optional<uint64_t> CompiledExpr::eval(const Assignment &a) const
{
  if (code_.empty()) {
    throw InternalError("evaluating an empty CompiledExpr");
  }
  uint64_t buf[8];
  for (size_t i = 0; i < code_.size(); ++i) {
    const Instr &ins = code_[i];
    const uint32_t *arg = args_.data() + ins.first_arg;
    uint64_t v = 0;
    bool known = true;
    switch (ins.op) {
      case Op::Const: v = ins.imm; break;
      case Op::Var:
      case Op::Next:
        known = a.known[ins.imm] != 0;
        v = a.values[ins.imm];
        break;
      case Op::And:
      case Op::Or: {
        const uint64_t absorbing = ins.op == Op::And ? 0 : 1;
        bool all_known = true;
        bool hit = false;
        for (uint32_t j = 0; j < ins.num_args; ++j) {
          if (!kn_[arg[j]]) {
            all_known = false;
          } else if ((val_[arg[j]] != 0) == (absorbing != 0)) {
            hit = true;
            break;
          }
        }
        if (hit) {
          v = absorbing;
        } else if (all_known) {
          v = 1 - absorbing;
        } else {
          known = false;
        }
        break;
      }
      case Op::Implies: {
        bool k0 = kn_[arg[0]], k1 = kn_[arg[1]];
        if ((k0 && !val_[arg[0]]) || (k1 && val_[arg[1]])) {
          v = 1;
        } else if (k0 && k1) {
          v = 0;
        } else {
          known = false;
        }
        break;
      }
      case Op::Ite: {
        if (kn_[arg[0]]) {
          uint32_t pick = val_[arg[0]] ? arg[1] : arg[2];
          known = kn_[pick] != 0;
          v = val_[pick];
        } else if (kn_[arg[1]] && kn_[arg[2]] && val_[arg[1]] == val_[arg[2]]) {
          v = val_[arg[1]];
        } else {
          known = false;
        }
        break;
      }
      case Op::BvMul:
      case Op::BvAnd: {
        // a zero operand decides the result
        if ((kn_[arg[0]] && val_[arg[0]] == 0)
            || (kn_[arg[1]] && val_[arg[1]] == 0)) {
          v = 0;
          break;
        }
        [[fallthrough]];
      }
      default: {
        for (uint32_t j = 0; j < ins.num_args; ++j) {
          if (!kn_[arg[j]]) {
            known = false;
            break;
          }
        }
        if (known) {
          if (ins.num_args <= 8) {
            for (uint32_t j = 0; j < ins.num_args; ++j) {
              buf[j] = val_[arg[j]];
            }
            v = apply_op(ins.op, ins.operand_sort,
                         std::span<const uint64_t>(buf, ins.num_args));
          } else {
            std::vector<uint64_t> tmp;
            for (uint32_t j = 0; j < ins.num_args; ++j) {
              tmp.push_back(val_[arg[j]]);
            }
            v = apply_op(ins.op, ins.operand_sort, tmp);
          }
        }
      }
    }
    val_[i] = v;
    kn_[i] = known ? 1 : 0;
  }
  if (!kn_.back()) {
    return std::nullopt;
  }
  return val_.back();
}

namespace {

bool enumerate(std::span<const CompiledExpr *const> constraints,
               Assignment &a,
               std::span<const FreeSlot> free,
               size_t pos,
               const std::function<bool()> &on_model,
               const std::function<void()> &on_branch)
{
  if (pos == free.size()) {
    for (const auto *c : constraints) {
      if (!c->holds(a)) {
        return true;
      }
    }
    return on_model();
  }
  const FreeSlot fs = free[pos];
  const uint64_t limit = fs.bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << fs.bits) - 1;
  for (uint64_t v = 0;; ++v) {
    if (on_branch) {
      on_branch();
    }
    a.set(fs.slot, v);
    bool ok = true;
    for (const auto *c : constraints) {
      if (!c->possible(a)) {
        ok = false;
        break;
      }
    }
    if (ok && !enumerate(constraints, a, free, pos + 1, on_model, on_branch)) {
      a.clear(fs.slot);
      return false;
    }
    if (v == limit) {
      break;
    }
  }
  a.clear(fs.slot);
  return true;
}

}  // namespace

bool for_each_model(std::span<const CompiledExpr *const> constraints,
                    Assignment &a,
                    std::span<const FreeSlot> free,
                    const std::function<bool()> &on_model,
                    const std::function<void()> &on_branch)
{
  // exceptions thrown by on_branch leave slots assigned; restore them
  try {
    return enumerate(constraints, a, free, 0, on_model, on_branch);
  } catch (...) {
    for (const auto &fs : free) {
      a.clear(fs.slot);
    }
    throw;
  }
}

}  // namespace kindmc
