#include "kindmc/parser.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace kindmc {

namespace {

enum class Section
{
  Init,
  Trans,
  Prop,
  Halt
};

std::string_view section_name(Section s)
{
  switch (s) {
    case Section::Init: return "init";
    case Section::Trans: return "trans";
    case Section::Prop: return "prop";
    case Section::Halt: return "halt";
  }
  return "?";
}

bool is_decimal(std::string_view a)
{
  if (a.empty()) {
    return false;
  }
  for (char c : a) {
    if (c < '0' || c > '9') {
      return false;
    }
  }
  return true;
}

bool is_arith(Op op)
{
  switch (op) {
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvMul:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvNot: return true;
    default: return false;
  }
}

class Elaborator
{
 public:
  Elaborator(const std::map<std::string, VarDecl> &decls,
             const std::string &source)
      : decls_(decls), source_(source)
  {
  }

  Expr elaborate(const SExpr &s, Section section,
                 std::optional<Sort> expected)
  {
    section_ = section;
    return elab(s, expected);
  }

 private:
  const std::map<std::string, VarDecl> &decls_;
  const std::string &source_;
  Section section_ = Section::Init;

  [[noreturn]] void error(ParseErrorKind k, const SExpr &at,
                          const std::string &msg)
  {
    throw ParseError(k, at.pos, msg, source_);
  }

  /// whether the sort of `s` can be inferred without context
  bool self_sorted(const SExpr &s) const
  {
    if (s.is_atom) {
      return !is_decimal(s.atom);
    }
    if (s.items.empty() || !s.items[0].is_atom) {
      return true;
    }
    auto op = op_from_name(s.items[0].atom);
    if (op && is_arith(*op)) {
      for (size_t i = 1; i < s.items.size(); ++i) {
        if (self_sorted(s.items[i])) {
          return true;
        }
      }
      return false;
    }
    if (op == Op::Ite && s.items.size() == 4) {
      return self_sorted(s.items[2]) || self_sorted(s.items[3]);
    }
    return true;
  }

  uint64_t parse_number(const SExpr &at, std::string_view digits, int base)
  {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                     v, base);
    if (ec != std::errc() || ptr != digits.data() + digits.size()
        || digits.empty()) {
      error(ParseErrorKind::Syntax, at, "malformed literal '" + at.to_string() + "'");
    }
    return v;
  }

  Expr literal(const SExpr &at, uint64_t value, Sort sort)
  {
    try {
      return mk_const(value, sort);
    } catch (const SortError &e) {
      error(ParseErrorKind::Sort, at, e.what());
    }
  }

  Expr elab_atom(const SExpr &s, std::optional<Sort> expected)
  {
    const std::string &a = s.atom;
    if (a == "true" || a == "false") {
      return mk_bool(a == "true");
    }
    if (is_decimal(a)) {
      if (!expected) {
        error(ParseErrorKind::Sort, s,
              "cannot infer the bit-vector width of literal " + a);
      }
      if (!expected->is_bv()) {
        error(ParseErrorKind::Sort, s,
              "numeric literal " + a + " used where sort "
                  + expected->to_string() + " is required");
      }
      return literal(s, parse_number(s, a, 10), *expected);
    }
    if (a.size() > 2 && a[0] == '#' && (a[1] == 'x' || a[1] == 'b')) {
      std::string_view digits(a.data() + 2, a.size() - 2);
      unsigned per_digit = a[1] == 'x' ? 4 : 1;
      unsigned width = static_cast<unsigned>(digits.size()) * per_digit;
      if (width > 64) {
        error(ParseErrorKind::Sort, s, "literal " + a + " is wider than 64 bits");
      }
      return literal(s, parse_number(s, digits, a[1] == 'x' ? 16 : 2),
                     Sort::bitvec(width));
    }
    if (!is_identifier(a)) {
      error(ParseErrorKind::Syntax, s, "unexpected token '" + a + "'");
    }
    auto it = decls_.find(a);
    if (it == decls_.end()) {
      error(ParseErrorKind::Undeclared, s, "undeclared variable '" + a + "'");
    }
    const VarDecl &d = it->second;
    if (d.role == VarRole::Input && section_ != Section::Trans) {
      error(ParseErrorKind::InputOutsideTrans, s,
            "input variable '" + a + "' used in "
                + std::string(section_name(section_)));
    }
    if (expected && d.sort != *expected) {
      error(ParseErrorKind::Sort, s,
            "variable '" + a + "' has sort " + d.sort.to_string() + " but sort "
                + expected->to_string() + " is required");
    }
    return mk_var(d.name, d.sort);
  }

  Expr elab(const SExpr &s, std::optional<Sort> expected)
  {
    if (s.is_atom) {
      return elab_atom(s, expected);
    }
    if (s.items.empty()) {
      error(ParseErrorKind::Syntax, s, "empty expression '()'");
    }
    const SExpr &head = s.items[0];
    if (!head.is_atom) {
      error(ParseErrorKind::Syntax, head, "expected an operator name");
    }
    if (head.atom == "_") {
      // (_ bvN W)
      if (s.items.size() != 3 || !s.items[1].is_atom
          || s.items[1].atom.rfind("bv", 0) != 0 || !s.items[2].is_atom) {
        error(ParseErrorKind::Syntax, s, "expected (_ bv<value> <width>)");
      }
      uint64_t value = parse_number(s, std::string_view(s.items[1].atom).substr(2), 10);
      uint64_t width = parse_number(s.items[2], s.items[2].atom, 10);
      if (width < 1 || width > 64) {
        error(ParseErrorKind::Sort, s, "bit-vector width must be in 1..64");
      }
      return literal(s, value, Sort::bitvec(static_cast<unsigned>(width)));
    }
    if (head.atom == "next") {
      if (s.items.size() != 2 || !s.items[1].is_atom) {
        error(ParseErrorKind::Syntax, s, "expected (next <state-var>)");
      }
      if (section_ != Section::Trans) {
        error(ParseErrorKind::NextOutsideTrans, s,
              "next(" + s.items[1].atom + ") used in "
                  + std::string(section_name(section_)));
      }
      auto it = decls_.find(s.items[1].atom);
      if (it == decls_.end()) {
        error(ParseErrorKind::Undeclared, s.items[1],
              "undeclared variable '" + s.items[1].atom + "'");
      }
      if (it->second.role != VarRole::State) {
        error(ParseErrorKind::Sort, s,
              "next() applied to input variable '" + s.items[1].atom + "'");
      }
      if (expected && it->second.sort != *expected) {
        error(ParseErrorKind::Sort, s,
              "(next " + it->first + ") has sort " + it->second.sort.to_string()
                  + " but sort " + expected->to_string() + " is required");
      }
      return mk_next(it->second.name, it->second.sort);
    }
    auto op = op_from_name(head.atom);
    if (!op) {
      error(ParseErrorKind::Syntax, head, "unknown operator '" + head.atom + "'");
    }
    std::vector<const SExpr *> args;
    for (size_t i = 1; i < s.items.size(); ++i) {
      args.push_back(&s.items[i]);
    }
    std::vector<Expr> kids(args.size());
    auto fail_sort = [&](const SortError &e) { error(ParseErrorKind::Sort, s, e.what()); };

    switch (*op) {
      case Op::Not:
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
        for (size_t i = 0; i < args.size(); ++i) {
          kids[i] = elab(*args[i], Sort::boolean());
        }
        break;
      case Op::Ite: {
        if (args.size() != 3) {
          error(ParseErrorKind::Syntax, s, "ite expects 3 operands");
        }
        kids[0] = elab(*args[0], Sort::boolean());
        std::optional<Sort> branch = expected;
        for (size_t i = 1; i < 3; ++i) {
          if (self_sorted(*args[i])) {
            kids[i] = elab(*args[i], std::nullopt);
            branch = kids[i]->sort;
          }
        }
        for (size_t i = 1; i < 3; ++i) {
          if (!kids[i]) {
            kids[i] = elab(*args[i], branch);
          }
        }
        break;
      }
      default: {
        // =, bit-vector arithmetic and comparisons: operands share a sort
        std::optional<Sort> operand;
        for (size_t i = 0; i < args.size(); ++i) {
          if (self_sorted(*args[i])) {
            kids[i] = elab(*args[i], std::nullopt);
            if (!operand) {
              operand = kids[i]->sort;
            }
          }
        }
        if (!operand && is_arith(*op)) {
          operand = expected;
        }
        for (size_t i = 0; i < args.size(); ++i) {
          if (!kids[i]) {
            if (!operand) {
              error(ParseErrorKind::Sort, *args[i],
                    "cannot infer the bit-vector width of literal "
                        + args[i]->to_string()
                        + " (no operand with a known sort)");
            }
            kids[i] = elab(*args[i], operand);
          }
        }
      }
    }
    try {
      Expr e = mk_app(*op, std::move(kids));
      if (expected && e->sort != *expected) {
        error(ParseErrorKind::Sort, s,
              "expression " + s.to_string() + " has sort " + e->sort.to_string()
                  + " but sort " + expected->to_string() + " is required");
      }
      return e;
    } catch (const SortError &e) {
      fail_sort(e);
    }
    throw InternalError("unreachable");
  }
};

Sort parse_sort(const SExpr &s, const std::string &source)
{
  if (s.is("bool")) {
    return Sort::boolean();
  }
  if (s.is_list() && s.items.size() == 2 && s.items[0].is("bv")
      && s.items[1].is_atom && is_decimal(s.items[1].atom)) {
    unsigned long w = std::stoul(s.items[1].atom);
    if (w < 1 || w > 64) {
      throw ParseError(ParseErrorKind::Sort, s.pos,
                       "bit-vector width must be in 1..64, got "
                           + s.items[1].atom,
                       source);
    }
    return Sort::bitvec(static_cast<unsigned>(w));
  }
  throw ParseError(ParseErrorKind::Syntax, s.pos,
                   "expected a sort: bool or (bv <width>), got " + s.to_string(),
                   source);
}

}  // namespace

TransitionSystem parse_system(std::string_view text, const std::string &source)
{
  auto docs = read_sexprs(text, source);
  if (docs.empty()) {
    throw ParseError(ParseErrorKind::MissingSection, {}, "empty document, expected (system ...)", source);
  }
  if (docs.size() > 1) {
    throw ParseError(ParseErrorKind::Syntax, docs[1].pos,
                     "unexpected content after (system ...)", source);
  }
  const SExpr &root = docs[0];
  if (!root.is_list() || root.items.empty() || !root.items[0].is("system")) {
    throw ParseError(ParseErrorKind::Syntax, root.pos, "expected (system ...)", source);
  }

  TransitionSystem sys;
  std::map<std::string, VarDecl> decls;
  // declarations first so formulas may precede or follow them
  for (size_t i = 1; i < root.items.size(); ++i) {
    const SExpr &item = root.items[i];
    if (!item.is_list() || item.items.empty() || !item.items[0].is_atom) {
      throw ParseError(ParseErrorKind::Syntax, item.pos,
                       "expected a section such as (var ...) or (init ...)", source);
    }
    const std::string &tag = item.items[0].atom;
    if (tag != "var" && tag != "input") {
      continue;
    }
    if (item.items.size() != 3 || !item.items[1].is_atom) {
      throw ParseError(ParseErrorKind::Syntax, item.pos,
                       "expected (" + tag + " <name> <sort>)", source);
    }
    const std::string &name = item.items[1].atom;
    if (!is_identifier(name)) {
      throw ParseError(ParseErrorKind::Syntax, item.items[1].pos,
                       "invalid identifier '" + name + "'", source);
    }
    if (name == "true" || name == "false" || name == "next" || op_from_name(name)) {
      throw ParseError(ParseErrorKind::Syntax, item.items[1].pos,
                       "'" + name + "' is reserved", source);
    }
    VarDecl d{name, parse_sort(item.items[2], source),
              tag == "var" ? VarRole::State : VarRole::Input};
    if (!decls.emplace(name, d).second) {
      throw ParseError(ParseErrorKind::Duplicate, item.pos,
                       "duplicate declaration of '" + name + "'", source);
    }
    sys.vars.push_back(d);
  }

  Elaborator elab(decls, source);
  std::map<std::string, bool> seen_props;
  for (size_t i = 1; i < root.items.size(); ++i) {
    const SExpr &item = root.items[i];
    const std::string &tag = item.items[0].atom;
    auto single = [&](Expr &slot, Section sec) {
      if (slot) {
        throw ParseError(ParseErrorKind::Duplicate, item.pos,
                         "duplicate (" + tag + ") section", source);
      }
      if (item.items.size() != 2) {
        throw ParseError(ParseErrorKind::Syntax, item.pos,
                         "expected (" + tag + " <bool-expr>)", source);
      }
      slot = elab.elaborate(item.items[1], sec, Sort::boolean());
    };
    if (tag == "var" || tag == "input") {
      continue;
    } else if (tag == "init") {
      single(sys.init, Section::Init);
    } else if (tag == "trans") {
      single(sys.trans, Section::Trans);
    } else if (tag == "halt") {
      single(sys.halt, Section::Halt);
    } else if (tag == "prop") {
      if (item.items.size() != 3 || !item.items[1].is_atom
          || !is_identifier(item.items[1].atom)) {
        throw ParseError(ParseErrorKind::Syntax, item.pos,
                         "expected (prop <name> <bool-expr>)", source);
      }
      const std::string &name = item.items[1].atom;
      if (seen_props[name]) {
        throw ParseError(ParseErrorKind::Duplicate, item.pos,
                         "duplicate property name '" + name + "'", source);
      }
      seen_props[name] = true;
      sys.props.push_back(
          {name, elab.elaborate(item.items[2], Section::Prop, Sort::boolean())});
    } else {
      throw ParseError(ParseErrorKind::Syntax, item.items[0].pos,
                       "unknown section '" + tag + "'", source);
    }
  }
  auto missing = [&](const char *what) {
    throw ParseError(ParseErrorKind::MissingSection, root.pos,
                     std::string("missing (") + what + " ...) section", source);
  };
  if (!sys.init) missing("init");
  if (!sys.trans) missing("trans");
  if (sys.props.empty()) missing("prop");
  if (!sys.halt) missing("halt");
  try {
    sys.validate();
  } catch (const ValidationError &e) {
    throw ParseError(ParseErrorKind::Sort, root.pos, e.what(), source);
  }
  return sys;
}

TransitionSystem parse_file(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(ParseErrorKind::Io, {0, 0}, "file not found or unreadable",
                     path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str(), path.string());
}

std::string print_sort(const Sort &s) { return s.to_string(); }

std::string print_expr(const Expr &e)
{
  switch (e->op) {
    case Op::Const: {
      if (e->sort.is_bool()) {
        return e->value ? "true" : "false";
      }
      std::string digits;
      if (e->sort.width % 4 == 0) {
        static const char *hex = "0123456789abcdef";
        for (int i = static_cast<int>(e->sort.width) / 4 - 1; i >= 0; --i) {
          digits.push_back(hex[(e->value >> (4 * i)) & 0xF]);
        }
        return "#x" + digits;
      }
      for (int i = static_cast<int>(e->sort.width) - 1; i >= 0; --i) {
        digits.push_back(((e->value >> i) & 1) ? '1' : '0');
      }
      return "#b" + digits;
    }
    case Op::Var: return e->name;
    case Op::Next: return "(next " + e->name + ")";
    default: break;
  }
  std::string out = "(" + std::string(op_name(e->op));
  for (const auto &k : e->kids) {
    out += " " + print_expr(k);
  }
  return out + ")";
}

std::string print_system(const TransitionSystem &sys)
{
  std::ostringstream os;
  os << "(system";
  for (const auto &v : sys.vars) {
    os << "\n  (" << (v.role == VarRole::State ? "var " : "input ") << v.name
       << " " << print_sort(v.sort) << ")";
  }
  os << "\n  (init " << print_expr(sys.init) << ")";
  os << "\n  (trans " << print_expr(sys.trans) << ")";
  for (const auto &p : sys.props) {
    os << "\n  (prop " << p.name << " " << print_expr(p.expr) << ")";
  }
  os << "\n  (halt " << print_expr(sys.halt) << "))\n";
  return os.str();
}

}  // namespace kindmc
