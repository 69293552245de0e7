#include <chrono>
#include <unordered_map>
#include <unordered_set>

#include "kindmc/eval.h"
#include "kindmc/solver.h"

namespace kindmc {

namespace {

using Clock = std::chrono::steady_clock;

struct Timeout
{
};

class Deadline
{
 public:
  explicit Deadline(unsigned timeout_ms)
  {
    if (timeout_ms) {
      end_ = Clock::now() + std::chrono::milliseconds(timeout_ms);
    }
  }

  void tick()
  {
    if (end_ && (++ticks_ & 0x3ff) == 0 && Clock::now() >= *end_) {
      throw Timeout{};
    }
  }

 private:
  std::optional<Clock::time_point> end_;
  uint64_t ticks_ = 0;
};

/// bit layout of one frame: each variable at a fixed offset in a packed key
struct Packing
{
  std::vector<VarDecl> vars;
  std::vector<unsigned> offset;
  unsigned bits = 0;

  explicit Packing(std::vector<VarDecl> vs) : vars(std::move(vs))
  {
    for (const auto &v : vars) {
      offset.push_back(bits);
      bits += v.sort.bits();
    }
  }

  uint64_t field(uint64_t key, size_t idx) const
  {
    return (key >> offset[idx]) & vars[idx].sort.mask();
  }

  uint64_t pack(const Assignment &a, size_t first_slot) const
  {
    uint64_t key = 0;
    for (size_t i = 0; i < vars.size(); ++i) {
      key |= a.values[first_slot + i] << offset[i];
    }
    return key;
  }

  void unpack(uint64_t key, Assignment &a, size_t first_slot) const
  {
    for (size_t i = 0; i < vars.size(); ++i) {
      a.set(first_slot + i, field(key, i));
    }
  }

  std::vector<FreeSlot> free_slots(size_t first_slot) const
  {
    std::vector<FreeSlot> out;
    for (size_t i = 0; i < vars.size(); ++i) {
      out.push_back({first_slot + i, vars[i].sort.bits()});
    }
    return out;
  }
};

struct Successor
{
  uint64_t inputs;
  uint64_t next;
};

/** Transition relation compiled over [state | inputs | next state] slots,
 *  with the successor lists computed so far. */
struct FrameCache
{
  Expr trans;  // keeps the cache key alive
  std::vector<VarDecl> vars;
  Packing state;
  Packing inputs;
  CompiledExpr compiled;
  std::unordered_map<uint64_t, std::vector<Successor>> succ;

  FrameCache(const Expr &t, const std::vector<VarDecl> &vs)
      : trans(t),
        vars(vs),
        state(select(vs, VarRole::State)),
        inputs(select(vs, VarRole::Input))
  {
    const size_t ns = state.vars.size();
    const size_t ni = inputs.vars.size();
    compiled = CompiledExpr(trans, [&](const ExprNode &n) -> size_t {
      const Packing &p = (n.op == Op::Next || is_state(n.name)) ? state : inputs;
      size_t base = n.op == Op::Next ? ns + ni : (&p == &state ? 0 : ns);
      for (size_t i = 0; i < p.vars.size(); ++i) {
        if (p.vars[i].name == n.name) {
          return base + i;
        }
      }
      throw InternalError("transition mentions undeclared variable " + n.name);
    });
  }

  static std::vector<VarDecl> select(const std::vector<VarDecl> &vs, VarRole r)
  {
    std::vector<VarDecl> out;
    for (const auto &v : vs) {
      if (v.role == r) {
        out.push_back(v);
      }
    }
    return out;
  }

  bool is_state(const std::string &name) const
  {
    for (const auto &v : state.vars) {
      if (v.name == name) {
        return true;
      }
    }
    return false;
  }

  const std::vector<Successor> &successors(uint64_t s, Deadline &dl)
  {
    auto it = succ.find(s);
    if (it != succ.end()) {
      return it->second;
    }
    const size_t ns = state.vars.size();
    const size_t ni = inputs.vars.size();
    Assignment a(ns + ni + ns);
    state.unpack(s, a, 0);
    auto free = inputs.free_slots(ns);
    for (auto &f : state.free_slots(ns + ni)) {
      free.push_back(f);
    }
    std::vector<Successor> out;
    const CompiledExpr *cs[] = {&compiled};
    for_each_model(
        cs, a, free,
        [&] {
          out.push_back({inputs.pack(a, ns), state.pack(a, ns + ni)});
          return true;
        },
        [&] { dl.tick(); });
    return succ.emplace(s, std::move(out)).first->second;
  }
};

}  // namespace

struct EnumeratorSolver::Impl
{
  SolverConfig cfg;
  std::vector<std::unique_ptr<FrameCache>> caches;

  FrameCache &cache_for(const Unrolling &u)
  {
    for (auto &c : caches) {
      if (c->trans.get() == u.trans.get() && c->vars.size() == u.vars.size()) {
        bool same = true;
        for (size_t i = 0; i < u.vars.size() && same; ++i) {
          same = c->vars[i].name == u.vars[i].name && c->vars[i].role == u.vars[i].role
                 && c->vars[i].sort.bits() == u.vars[i].sort.bits();
        }
        if (same) {
          return *c;
        }
      }
    }
    caches.push_back(std::make_unique<FrameCache>(u.trans, u.vars));
    return *caches.back();
  }

  SolverVerdict structured(const Query &q, Deadline &dl);
  SolverVerdict generic(const Query &q, Deadline &dl);
  SolverVerdict finish(const Query &q, Model m);
};

namespace {

/** Depth-first search over the frames of one unrolled query. */
class FrameSearch
{
 public:
  FrameSearch(const Unrolling &u, unsigned k, FrameCache &fc, Deadline &dl)
      : u_(u), k_(k), fc_(fc), dl_(dl), failed_(k), scratch_(fc.state.vars.size())
  {
    auto resolve = [this](const ExprNode &n) -> size_t {
      if (n.op == Op::Var) {
        for (size_t i = 0; i < fc_.state.vars.size(); ++i) {
          if (fc_.state.vars[i].name == n.name) {
            return i;
          }
        }
      }
      throw InternalError("frame condition mentions non-state variable " + n.name);
    };
    auto compile = [&](const Expr &e) -> const CompiledExpr * {
      if (!e) {
        return nullptr;
      }
      auto it = compiled_.find(e.get());
      if (it == compiled_.end()) {
        it = compiled_.emplace(e.get(), CompiledExpr(e, resolve)).first;
      }
      return &it->second;
    };
    init_ = compile(u.init);
    for (unsigned j = 0; j < k; ++j) {
      assume_.push_back(compile(j < u.assume.size() ? u.assume[j] : nullptr));
      std::vector<const CompiledExpr *> g;
      if (j < u.goals.size()) {
        for (const auto &goal : u.goals[j]) {
          g.push_back(compile(goal.condition));
        }
      }
      goals_.push_back(std::move(g));
    }
  }

  /// true iff a path was found; path()/inputs() then hold it
  bool run()
  {
    const size_t ns = fc_.state.vars.size();
    Assignment a(ns);
    std::vector<const CompiledExpr *> cs;
    if (init_) {
      cs.push_back(init_);
    }
    if (assume_[0]) {
      cs.push_back(assume_[0]);
    }
    bool found = false;
    for_each_model(
        cs, a, fc_.state.free_slots(0),
        [&] {
          const uint64_t s = fc_.state.pack(a, 0);
          path_.assign(1, s);
          inputs_.clear();
          found = dfs(0, s);
          return !found;
        },
        [&] { dl_.tick(); });
    return found;
  }

  const std::vector<uint64_t> &path() const { return path_; }
  const std::vector<uint64_t> &inputs() const { return inputs_; }

 private:
  bool holds(const CompiledExpr *c, uint64_t s)
  {
    if (!c) {
      return true;
    }
    fc_.state.unpack(s, scratch_, 0);
    return c->holds(scratch_);
  }

  bool goal_reached(unsigned j, uint64_t s)
  {
    for (const auto *g : goals_[j]) {
      if (holds(g, s)) {
        return true;
      }
    }
    return false;
  }

  /// s is the state at 0-based step j, already admitted by init/assume
  bool dfs(unsigned j, uint64_t s)
  {
    dl_.tick();
    if (u_.any_depth || j + 1 == k_) {
      if (goal_reached(j, s)) {
        return true;
      }
    }
    if (j + 1 == k_ || failed_[j].count(s)) {
      return false;
    }
    for (const auto &succ : fc_.successors(s, dl_)) {
      if (!holds(assume_[j + 1], succ.next)) {
        continue;
      }
      path_.push_back(succ.next);
      inputs_.push_back(succ.inputs);
      if (dfs(j + 1, succ.next)) {
        return true;
      }
      path_.pop_back();
      inputs_.pop_back();
    }
    failed_[j].insert(s);
    return false;
  }

  const Unrolling &u_;
  unsigned k_;
  FrameCache &fc_;
  Deadline &dl_;
  std::unordered_map<const ExprNode *, CompiledExpr> compiled_;
  const CompiledExpr *init_ = nullptr;
  std::vector<const CompiledExpr *> assume_;
  std::vector<std::vector<const CompiledExpr *>> goals_;
  std::vector<std::unordered_set<uint64_t>> failed_;
  Assignment scratch_;
  std::vector<uint64_t> path_;
  std::vector<uint64_t> inputs_;
};

}  // namespace

SolverVerdict EnumeratorSolver::Impl::structured(const Query &q, Deadline &dl)
{
  const Unrolling &u = *q.unrolling;
  FrameCache &fc = cache_for(u);
  const unsigned frame_bits = fc.state.bits + fc.inputs.bits;
  if (frame_bits > cfg.enumerator_bit_cap) {
    throw ConfigError("enumerator: " + std::to_string(frame_bits)
                      + " state+input bits per step exceed the cap of "
                      + std::to_string(cfg.enumerator_bit_cap));
  }
  FrameSearch search(u, q.depth, fc, dl);
  if (!search.run()) {
    return {SolverStatus::Unsat, {}, "", false};
  }

  const auto &path = search.path();
  const auto &ins = search.inputs();
  Model m;
  for (const auto &d : q.decls) {
    uint64_t v = 0;
    const size_t idx = d.step - 1;
    const Packing &p = d.role == VarRole::State ? fc.state : fc.inputs;
    const uint64_t *key = nullptr;
    if (d.role == VarRole::State && idx < path.size()) {
      key = &path[idx];
    } else if (d.role == VarRole::Input && idx < ins.size()) {
      key = &ins[idx];
    }
    if (key) {
      for (size_t i = 0; i < p.vars.size(); ++i) {
        if (p.vars[i].name == d.base) {
          v = p.field(*key, i);
        }
      }
    }
    m[d.name()] = v;
  }
  return finish(q, std::move(m));
}

SolverVerdict EnumeratorSolver::Impl::generic(const Query &q, Deadline &dl)
{
  std::vector<std::pair<std::string, Sort>> slots;
  unsigned total = 0;
  for (const auto &d : q.decls) {
    slots.emplace_back(d.name(), d.sort);
    total += d.sort.bits();
  }
  for (const auto &mk : q.markers) {
    slots.emplace_back(mk.name, Sort::boolean());
    total += 1;
  }
  if (total > cfg.enumerator_bit_cap) {
    throw ConfigError("enumerator: " + std::to_string(total)
                      + " declared bits exceed the cap of "
                      + std::to_string(cfg.enumerator_bit_cap));
  }
  CompiledExpr formula(q.full_formula(), [&](const ExprNode &n) -> size_t {
    for (size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].first == n.name && n.op == Op::Var) {
        return i;
      }
    }
    throw InternalError("query mentions undeclared name " + n.name);
  });
  Assignment a(slots.size());
  std::vector<FreeSlot> free;
  for (size_t i = 0; i < slots.size(); ++i) {
    free.push_back({i, slots[i].second.bits()});
  }
  const CompiledExpr *cs[] = {&formula};
  std::optional<Model> found;
  for_each_model(
      cs, a, free,
      [&] {
        Model m;
        for (size_t i = 0; i < q.decls.size(); ++i) {
          m[slots[i].first] = a.values[i];
        }
        found = std::move(m);
        return false;
      },
      [&] { dl.tick(); });
  if (!found) {
    return {SolverStatus::Unsat, {}, "", false};
  }
  return finish(q, std::move(*found));
}

SolverVerdict EnumeratorSolver::Impl::finish(const Query &q, Model m)
{
  for (const auto &mk : q.markers) {
    m[mk.name] = eval_expr(mk.definition, m);
  }
  if (!eval_expr(q.full_formula(), m)) {
    throw InternalError("enumerator produced an assignment that violates the "
                        + to_string(q.kind) + " formula at k="
                        + std::to_string(q.depth));
  }
  return {SolverStatus::Sat, std::move(m), "", false};
}

EnumeratorSolver::EnumeratorSolver(SolverConfig cfg) : impl_(std::make_unique<Impl>())
{
  cfg.validate();
  impl_->cfg = std::move(cfg);
}

EnumeratorSolver::~EnumeratorSolver() = default;

SolverVerdict EnumeratorSolver::check(const Query &q)
{
  Deadline dl(impl_->cfg.timeout_ms);
  try {
    return q.unrolling ? impl_->structured(q, dl) : impl_->generic(q, dl);
  } catch (const Timeout &) {
    return {SolverStatus::Unknown, {}, "enumerator: timeout after "
            + std::to_string(impl_->cfg.timeout_ms) + " ms", false};
  }
}

}  // namespace kindmc
