#include "kindmc/oracle.h"

#include <deque>
#include <functional>
#include <unordered_map>

#include "kindmc/eval.h"
#include "kindmc/trace.h"

namespace kindmc {

namespace {

struct Parent
{
  uint64_t state;
  uint64_t inputs;
  unsigned level;
  bool root;
};

class Explorer
{
 public:
  Explorer(const TransitionSystem &sys, OracleLimits limits)
      : sys_(sys), svars_(sys.state_vars()), ivars_(sys.input_vars())
  {
    if (sys.state_bits() > limits.state_bits) {
      throw CapError("oracle: " + std::to_string(sys.state_bits())
                     + " state bits exceed the cap of "
                     + std::to_string(limits.state_bits));
    }
    if (sys.input_bits() > limits.input_bits) {
      throw CapError("oracle: " + std::to_string(sys.input_bits())
                     + " input bits exceed the cap of "
                     + std::to_string(limits.input_bits));
    }
    const size_t ns = svars_.size();
    const size_t ni = ivars_.size();
    auto index_of = [](const std::vector<VarDecl> &vs, const std::string &n) {
      for (size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].name == n) {
          return i;
        }
      }
      throw InternalError("oracle: undeclared variable " + n);
    };
    init_ = CompiledExpr(sys.init, [&](const ExprNode &n) {
      return index_of(svars_, n.name);
    });
    trans_ = CompiledExpr(sys.trans, [&](const ExprNode &n) -> size_t {
      if (n.op == Op::Next) {
        return ns + ni + index_of(svars_, n.name);
      }
      if (sys_.find(n.name)->role == VarRole::State) {
        return index_of(svars_, n.name);
      }
      return ns + index_of(ivars_, n.name);
    });
  }

  /** Runs BFS; `visit` sees each newly discovered state (with its BFS
   *  level) and returns true to stop. Returns the stopping key. */
  std::optional<uint64_t> run(const std::function<bool(uint64_t, unsigned)> &visit)
  {
    const size_t ns = svars_.size();
    const size_t ni = ivars_.size();
    std::deque<uint64_t> queue;
    std::optional<uint64_t> stop;

    Assignment a0(ns);
    const CompiledExpr *ic[] = {&init_};
    for_each_model(ic, a0, slots(0, svars_), [&] {
      const uint64_t key = pack(a0, 0, svars_);
      if (!eval_expr(sys_.init, to_state(key))) {
        throw InternalError("oracle: compiled init disagrees with evaluator");
      }
      if (discover(key, {0, 0, 0, true}, queue) && visit(key, 0)) {
        stop = key;
        return false;
      }
      return true;
    });

    Assignment a(ns + ni + ns);
    const CompiledExpr *tc[] = {&trans_};
    auto free = slots(ns, ivars_);
    for (auto f : slots(ns + ni, svars_)) {
      free.push_back(f);
    }
    while (!stop && !queue.empty()) {
      const uint64_t s = queue.front();
      queue.pop_front();
      const unsigned level = parents_.at(s).level;
      max_level_ = std::max(max_level_, level);
      unpack(s, a, 0, svars_);
      State cur = to_state(s);
      for_each_model(tc, a, free, [&] {
        const uint64_t in = pack(a, ns, ivars_);
        const uint64_t next = pack(a, ns + ni, svars_);
        State nxt = to_state(next);
        if (!eval_expr(sys_.trans, cur, to_inputs(in), &nxt)) {
          throw InternalError("oracle: compiled transition disagrees with evaluator");
        }
        if (discover(next, {s, in, level + 1, false}, queue) && visit(next, level + 1)) {
          stop = next;
          max_level_ = std::max(max_level_, level + 1);
          return false;
        }
        return true;
      });
    }
    return stop;
  }

  Trace trace_to(uint64_t key) const
  {
    Trace t;
    std::vector<uint64_t> states{key};
    std::vector<uint64_t> ins;
    const Parent *p = &parents_.at(key);
    while (!p->root) {
      ins.push_back(p->inputs);
      states.push_back(p->state);
      p = &parents_.at(p->state);
    }
    for (auto it = states.rbegin(); it != states.rend(); ++it) {
      t.states.push_back(to_state(*it));
    }
    for (auto it = ins.rbegin(); it != ins.rend(); ++it) {
      t.inputs.push_back(to_inputs(*it));
    }
    return t;
  }

  State to_state(uint64_t key) const
  {
    State s;
    unsigned off = 0;
    for (auto it = svars_.rbegin(); it != svars_.rend(); ++it) {
      s.bindings[it->name] = (key >> off) & it->sort.mask();
      off += it->sort.bits();
    }
    return s;
  }

  uint64_t key_of(const State &s) const
  {
    uint64_t key = 0;
    for (const auto &v : svars_) {
      key = (key << v.sort.bits()) | (s.at(v.name) & v.sort.mask());
    }
    return key;
  }

  uint64_t explored() const { return parents_.size(); }
  unsigned max_level() const { return max_level_; }
  const std::vector<uint64_t> &order() const { return order_; }

 private:
  bool discover(uint64_t key, Parent p, std::deque<uint64_t> &queue)
  {
    if (!parents_.emplace(key, p).second) {
      return false;
    }
    order_.push_back(key);
    queue.push_back(key);
    return true;
  }

  Valuation to_inputs(uint64_t key) const
  {
    Valuation v;
    unsigned off = 0;
    for (auto it = ivars_.rbegin(); it != ivars_.rend(); ++it) {
      v[it->name] = (key >> off) & it->sort.mask();
      off += it->sort.bits();
    }
    return v;
  }

  /// first variable most significant
  static uint64_t pack(const Assignment &a, size_t first, const std::vector<VarDecl> &vs)
  {
    uint64_t key = 0;
    for (size_t i = 0; i < vs.size(); ++i) {
      key = (key << vs[i].sort.bits()) | a.values[first + i];
    }
    return key;
  }

  static void unpack(uint64_t key, Assignment &a, size_t first,
                     const std::vector<VarDecl> &vs)
  {
    for (size_t i = vs.size(); i-- > 0;) {
      a.set(first + i, key & vs[i].sort.mask());
      key >>= vs[i].sort.bits();
    }
  }

  static std::vector<FreeSlot> slots(size_t first, const std::vector<VarDecl> &vs)
  {
    std::vector<FreeSlot> out;
    for (size_t i = 0; i < vs.size(); ++i) {
      out.push_back({first + i, vs[i].sort.bits()});
    }
    return out;
  }

  const TransitionSystem &sys_;
  std::vector<VarDecl> svars_;
  std::vector<VarDecl> ivars_;
  CompiledExpr init_;
  CompiledExpr trans_;
  std::unordered_map<uint64_t, Parent> parents_;
  std::vector<uint64_t> order_;
  unsigned max_level_ = 0;
};

}  // namespace

OracleResult bfs_check(const TransitionSystem &sys, OracleLimits limits)
{
  Explorer ex(sys, limits);
  auto bad = ex.run([&](uint64_t key, unsigned) {
    return first_violated_prop(sys, ex.to_state(key)).has_value();
  });
  OracleResult r;
  r.explored = ex.explored();
  r.depth = ex.max_level();
  if (bad) {
    r.unsafe = true;
    Trace t = ex.trace_to(*bad);
    t.violated_prop = first_violated_prop(sys, t.states.back());
    r.depth = static_cast<unsigned>(t.length() - 1);
    r.shortest = std::move(t);
  }
  return r;
}

bool reachable(const TransitionSystem &sys, const State &s, OracleLimits limits)
{
  Explorer ex(sys, limits);
  const uint64_t goal = ex.key_of(s);
  return ex.run([&](uint64_t key, unsigned) { return key == goal; }).has_value();
}

std::vector<State> reachable_states(const TransitionSystem &sys, OracleLimits limits)
{
  Explorer ex(sys, limits);
  ex.run([](uint64_t, unsigned) { return false; });
  std::vector<State> out;
  for (uint64_t key : ex.order()) {
    out.push_back(ex.to_state(key));
  }
  return out;
}

}  // namespace kindmc
