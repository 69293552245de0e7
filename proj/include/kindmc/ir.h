#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kindmc {

/** Raised when an operation is called in a way that only a bug upstream
 *  (skipped validation, mismatched declarations) could produce. */
class InternalError : public std::logic_error
{
 public:
  using std::logic_error::logic_error;
};

/** Ill-sorted expression construction. */
class SortError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/** TransitionSystem invariant violation (undeclared names, next() in the
 *  wrong section, ...). */
class ValidationError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

enum class SortKind
{
  Bool,
  BitVec
};

struct Sort
{
  SortKind kind = SortKind::Bool;
  unsigned width = 0;  // BitVec only, 1..64

  static Sort boolean() { return {SortKind::Bool, 0}; }
  static Sort bitvec(unsigned width);

  bool is_bool() const { return kind == SortKind::Bool; }
  bool is_bv() const { return kind == SortKind::BitVec; }
  /// number of bits a concrete value of this sort occupies
  unsigned bits() const { return is_bool() ? 1 : width; }
  uint64_t mask() const;

  std::string to_string() const;

  friend bool operator==(const Sort &, const Sort &) = default;
};

enum class VarRole
{
  State,
  Input
};

struct VarDecl
{
  std::string name;
  Sort sort;
  VarRole role = VarRole::State;

  friend bool operator==(const VarDecl &, const VarDecl &) = default;
};

/// identifiers: [A-Za-z_][A-Za-z0-9_]*
bool is_identifier(std::string_view s);

enum class Op
{
  Const,
  Var,
  Next,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Ite,
  Eq,
  BvAdd,
  BvSub,
  BvMul,
  BvAnd,
  BvOr,
  BvXor,
  BvNot,
  BvUle,
  BvUlt,
  BvUge,
  BvUgt
};

/// surface/SMT-LIB operator name ("bvadd", "and", ...). Const/Var/Next have
/// no operator name and return "".
std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/** Immutable, sorted expression node. Build through the mk_* functions,
 *  which enforce well-sortedness. */
struct ExprNode
{
  Op op;
  Sort sort;
  uint64_t value = 0;    // Const
  std::string name;      // Var / Next
  std::vector<Expr> kids;
};

Expr mk_bool(bool b);
Expr mk_true();
Expr mk_false();
Expr mk_bv(uint64_t value, unsigned width);
Expr mk_const(uint64_t value, Sort sort);
Expr mk_var(std::string name, Sort sort);
Expr mk_next(std::string name, Sort sort);
/// generic constructor for every operator other than Const/Var/Next
Expr mk_app(Op op, std::vector<Expr> kids);

Expr mk_not(Expr e);
Expr mk_and(std::vector<Expr> kids);
Expr mk_or(std::vector<Expr> kids);
Expr mk_implies(Expr a, Expr b);
Expr mk_eq(Expr a, Expr b);
Expr mk_ite(Expr c, Expr t, Expr e);

bool structurally_equal(const Expr &a, const Expr &b);

struct NamedProp
{
  std::string name;
  Expr expr;
};

/** Symbolic transition system: state/input declarations, initial-state
 *  formula, transition relation, safety properties and the halt
 *  (completeness threshold) predicate. */
class TransitionSystem
{
 public:
  std::vector<VarDecl> vars;
  Expr init;
  Expr trans;
  std::vector<NamedProp> props;
  Expr halt;

  std::vector<VarDecl> state_vars() const;
  std::vector<VarDecl> input_vars() const;
  const VarDecl *find(std::string_view name) const;

  unsigned state_bits() const;
  unsigned input_bits() const;

  /// conjunction of all properties (phi(s))
  Expr all_props() const;

  /** Checks every structural invariant; throws ValidationError naming the
   *  offending section. */
  void validate() const;
};

using Valuation = std::map<std::string, uint64_t>;

/// concrete valuation of the state variables
struct State
{
  Valuation bindings;

  uint64_t at(const std::string &name) const;
  friend bool operator==(const State &, const State &) = default;
};

struct Trace
{
  std::vector<State> states;
  std::vector<Valuation> inputs;  // inputs[j] labels states[j] -> states[j+1]
  std::optional<std::string> violated_prop;

  size_t length() const { return states.size(); }
};

std::string to_string(const State &s);

}  // namespace kindmc
