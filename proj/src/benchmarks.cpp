#include "kindmc/benchmarks.h"

#include <bit>

namespace kindmc {

namespace {

unsigned width_for(uint64_t max_value)
{
  return std::max(1u, static_cast<unsigned>(std::bit_width(max_value)));
}

Expr bvadd(Expr a, Expr b) { return mk_app(Op::BvAdd, {std::move(a), std::move(b)}); }
Expr bvult(Expr a, Expr b) { return mk_app(Op::BvUlt, {std::move(a), std::move(b)}); }
Expr bvule(Expr a, Expr b) { return mk_app(Op::BvUle, {std::move(a), std::move(b)}); }
Expr bvand(Expr a, Expr b) { return mk_app(Op::BvAnd, {std::move(a), std::move(b)}); }

TransitionSystem chain_bug(uint64_t d)
{
  const Sort s = Sort::bitvec(width_for(d));
  auto x = mk_var("x", s);
  TransitionSystem sys;
  sys.vars = {{"x", s, VarRole::State}};
  sys.init = mk_eq(x, mk_const(0, s));
  sys.trans = mk_eq(mk_next("x", s), bvadd(x, mk_const(1, s)));
  sys.props = {{"no_hit", mk_not(mk_eq(x, mk_const(d, s)))}};
  sys.halt = mk_false();
  return sys;
}

TransitionSystem diamond_parity(uint64_t d)
{
  const Sort si = Sort::bitvec(width_for(d));
  const Sort sx = Sort::bitvec(3);
  auto i = mk_var("i", si);
  auto x = mk_var("x", sx);
  auto b = mk_var("b", Sort::boolean());
  auto looping = bvult(i, mk_const(d, si));
  TransitionSystem sys;
  sys.vars = {{"i", si, VarRole::State},
              {"x", sx, VarRole::State},
              {"b", Sort::boolean(), VarRole::Input}};
  sys.init = mk_and({mk_eq(i, mk_const(0, si)), mk_eq(x, mk_const(0, sx))});
  sys.trans = mk_and(
      {mk_eq(mk_next("i", si), mk_ite(looping, bvadd(i, mk_const(1, si)), i)),
       mk_eq(mk_next("x", sx),
             mk_ite(looping,
                    bvadd(x, mk_ite(b, mk_const(2, sx), mk_const(1, sx))), x))});
  auto done = mk_eq(i, mk_const(d, si));
  sys.props = {{"even_at_exit",
                mk_implies(done, mk_eq(bvand(x, mk_const(1, sx)), mk_const(0, sx)))}};
  sys.halt = done;
  return sys;
}

TransitionSystem const_check(uint64_t d)
{
  if (d == ~uint64_t{0}) {
    throw BenchmarkError("const_check: depth too large for a 64-bit counter");
  }
  const Sort si = Sort::bitvec(width_for(d + 1));
  auto i = mk_var("i", si);
  auto done = mk_var("done", Sort::boolean());
  auto at_bound = mk_eq(i, mk_const(d, si));
  TransitionSystem sys;
  sys.vars = {{"i", si, VarRole::State}, {"done", Sort::boolean(), VarRole::State}};
  sys.init = mk_and({mk_eq(i, mk_const(0, si)), mk_not(done)});
  sys.trans = mk_and(
      {mk_eq(mk_next("i", si),
             mk_ite(mk_and({mk_not(done), bvult(i, mk_const(d, si))}),
                    bvadd(i, mk_const(1, si)), i)),
       mk_eq(mk_next("done", Sort::boolean()), mk_or({done, at_bound}))});
  sys.props = {{"holds_const", mk_implies(done, mk_eq(i, mk_const(d + 1, si)))}};
  sys.halt = done;
  return sys;
}

TransitionSystem accumulator(uint64_t d, bool buggy)
{
  if (d > (~uint64_t{0} >> 1)) {
    throw BenchmarkError("accumulator: 2*depth does not fit in 64 bits");
  }
  const Sort s = Sort::bitvec(width_for(2 * d));
  auto n = mk_var("n", s);
  auto i = mk_var("i", s);
  auto sn = mk_var("sn", s);
  auto running = bvult(i, n);
  Expr inc = mk_const(2, s);
  if (buggy) {
    inc = mk_ite(mk_eq(i, mk_const(d - 1, s)), mk_const(1, s), mk_const(2, s));
  }
  TransitionSystem sys;
  sys.vars = {{"n", s, VarRole::State}, {"i", s, VarRole::State}, {"sn", s, VarRole::State}};
  sys.init = mk_and({mk_eq(i, mk_const(0, s)), mk_eq(sn, mk_const(0, s)),
                     bvule(n, mk_const(d, s))});
  sys.trans = mk_and({mk_eq(mk_next("n", s), n),
                      mk_eq(mk_next("i", s), mk_ite(running, bvadd(i, mk_const(1, s)), i)),
                      mk_eq(mk_next("sn", s), mk_ite(running, bvadd(sn, inc), sn))});
  sys.props = {{"sum_ok", mk_eq(sn, bvadd(i, i))}};
  sys.halt = mk_not(running);
  return sys;
}

}  // namespace

TransitionSystem generate_benchmark(const BenchmarkSpec &spec)
{
  if (spec.depth == 0) {
    throw BenchmarkError("benchmark depth must be positive");
  }
  TransitionSystem sys;
  switch (spec.family) {
    case BenchmarkFamily::ChainBug: sys = chain_bug(spec.depth); break;
    case BenchmarkFamily::DiamondParity: sys = diamond_parity(spec.depth); break;
    case BenchmarkFamily::ConstCheck: sys = const_check(spec.depth); break;
    case BenchmarkFamily::Accumulator: sys = accumulator(spec.depth, spec.buggy); break;
  }
  sys.validate();
  return sys;
}

std::optional<uint64_t> expected_shortest_cex(const BenchmarkSpec &spec)
{
  switch (spec.family) {
    case BenchmarkFamily::ChainBug:
    case BenchmarkFamily::DiamondParity: return spec.depth + 1;
    case BenchmarkFamily::ConstCheck: return spec.depth + 2;
    case BenchmarkFamily::Accumulator:
      if (spec.buggy) {
        return spec.depth + 1;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string to_string(BenchmarkFamily f)
{
  switch (f) {
    case BenchmarkFamily::ChainBug: return "chain_bug";
    case BenchmarkFamily::DiamondParity: return "diamond_parity";
    case BenchmarkFamily::ConstCheck: return "const_check";
    case BenchmarkFamily::Accumulator: return "accumulator";
  }
  return "?";
}

std::optional<BenchmarkFamily> family_from_string(const std::string &s)
{
  for (auto f : {BenchmarkFamily::ChainBug, BenchmarkFamily::DiamondParity,
                 BenchmarkFamily::ConstCheck, BenchmarkFamily::Accumulator}) {
    if (to_string(f) == s) {
      return f;
    }
  }
  return std::nullopt;
}

std::string benchmark_name(const BenchmarkSpec &spec)
{
  std::string base = to_string(spec.family);
  if (spec.family == BenchmarkFamily::Accumulator) {
    base += spec.buggy ? "_buggy" : "_safe";
  }
  return base + "_" + std::to_string(spec.depth);
}

std::vector<std::string> suite_names() { return {"paper-analogues", "smoke"}; }

std::vector<BenchmarkSpec> benchmark_suite(const std::string &name)
{
  using F = BenchmarkFamily;
  if (name == "paper-analogues") {
    std::vector<BenchmarkSpec> out;
    for (uint64_t d : {4, 6, 9, 11, 20}) {
      out.push_back({F::ChainBug, d, true});
    }
    for (uint64_t d : {9, 25}) {
      out.push_back({F::DiamondParity, d, true});
    }
    for (uint64_t d : {16, 64}) {
      out.push_back({F::ConstCheck, d, true});
    }
    out.push_back({F::Accumulator, 4, false});
    out.push_back({F::Accumulator, 4, true});
    return out;
  }
  if (name == "smoke") {
    return {{F::ChainBug, 5, true},
            {F::DiamondParity, 5, true},
            {F::ConstCheck, 8, true},
            {F::Accumulator, 4, false}};
  }
  throw BenchmarkError("unknown suite '" + name + "'");
}

}  // namespace kindmc
