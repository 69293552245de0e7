#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kindmc/ir.h"

namespace kindmc {

/** Concrete evaluation. Variables are looked up in `state` first and then in
 *  `inputs`; (next x) is looked up in `next_state`, which must be supplied
 *  iff `e` mentions next(). Booleans evaluate to 0/1.
 *  Unbound variables throw InternalError. */
uint64_t eval_expr(const Expr &e,
                   const Valuation &state,
                   const Valuation &inputs = {},
                   const Valuation *next_state = nullptr);

inline uint64_t eval_expr(const Expr &e,
                          const State &state,
                          const Valuation &inputs = {},
                          const State *next_state = nullptr)
{
  return eval_expr(e, state.bindings, inputs,
                   next_state ? &next_state->bindings : nullptr);
}

/// value of a non-leaf operator applied to fully known operands
uint64_t apply_op(Op op, Sort operand_sort, std::span<const uint64_t> args);

/** Partial assignment over numbered slots. */
struct Assignment
{
  std::vector<uint64_t> values;
  std::vector<uint8_t> known;

  explicit Assignment(size_t n = 0) : values(n, 0), known(n, 0) {}

  void set(size_t slot, uint64_t v)
  {
    values[slot] = v;
    known[slot] = 1;
  }
  void clear(size_t slot) { known[slot] = 0; }
  size_t size() const { return values.size(); }
};

/** Expression flattened over numbered slots with Kleene (three-valued)
 *  evaluation: unassigned slots are unknown, and an operator is decided as
 *  soon as its known operands force the result (false conjunct, true
 *  disjunct, decided ite condition, ...).
 *
 *  Not safe for concurrent use of a single instance (scratch buffer). */
class CompiledExpr
{
 public:
  /// `slot_of` maps each Var/Next leaf to its slot index
  using SlotResolver = std::function<size_t(const ExprNode &)>;

  CompiledExpr() = default;
  CompiledExpr(const Expr &e, const SlotResolver &slot_of);

  /// nullopt when undetermined under the partial assignment
  std::optional<uint64_t> eval(const Assignment &a) const;

  /// true iff the expression is known to be true (false or unknown -> false)
  bool holds(const Assignment &a) const
  {
    auto v = eval(a);
    return v && *v != 0;
  }
  /// false only if the expression is known to be false
  bool possible(const Assignment &a) const
  {
    auto v = eval(a);
    return !v || *v != 0;
  }

 private:
  struct Instr
  {
    Op op;
    Sort operand_sort;
    uint64_t imm = 0;  // constant value or slot index
    uint32_t first_arg = 0;
    uint32_t num_args = 0;
  };
  std::vector<Instr> code_;
  std::vector<uint32_t> args_;
  mutable std::vector<uint64_t> val_;
  mutable std::vector<uint8_t> kn_;
};

struct FreeSlot
{
  size_t slot;
  unsigned bits;
};

/** Enumerates completions of `a` over `free` (first slot most significant,
 *  each slot ascending) under which every constraint in `constraints`
 *  evaluates to true, pruning a branch as soon as some constraint is known
 *  false. `on_model` returns false to stop the enumeration; the function
 *  returns false iff it was stopped. `on_branch`, when set, runs once per
 *  value tried and may throw to abandon the search. Slots in `free` are
 *  left unassigned on return. */
bool for_each_model(std::span<const CompiledExpr *const> constraints,
                    Assignment &a,
                    std::span<const FreeSlot> free,
                    const std::function<bool()> &on_model,
                    const std::function<void()> &on_branch = {});

}  // namespace kindmc
