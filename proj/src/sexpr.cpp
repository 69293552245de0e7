#include "kindmc/sexpr.h"

namespace kindmc {

std::string_view to_string(ParseErrorKind k)
{
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax error";
    case ParseErrorKind::Sort: return "sort error";
    case ParseErrorKind::Undeclared: return "undeclared variable";
    case ParseErrorKind::Duplicate: return "duplicate declaration";
    case ParseErrorKind::NextOutsideTrans: return "next outside trans";
    case ParseErrorKind::InputOutsideTrans: return "input outside trans";
    case ParseErrorKind::MissingSection: return "missing section";
    case ParseErrorKind::Io: return "i/o error";
  }
  return "error";
}

ParseError::ParseError(ParseErrorKind kind, SourcePos pos,
                       const std::string &msg, const std::string &source)
    : std::runtime_error(source + ":" + std::to_string(pos.line) + ":"
                         + std::to_string(pos.column) + ": "
                         + std::string(kindmc::to_string(kind)) + ": " + msg),
      kind_(kind),
      pos_(pos)
{
}

std::string SExpr::to_string() const
{
  if (is_atom) {
    return atom;
  }
  std::string out = "(";
  for (size_t i = 0; i < items.size(); ++i) {
    out += (i ? " " : "") + items[i].to_string();
  }
  return out + ")";
}

namespace {

class Reader
{
 public:
  Reader(std::string_view text, const std::string &source)
      : text_(text), source_(source)
  {
  }

  std::vector<SExpr> read_all()
  {
    std::vector<SExpr> out;
    skip_space();
    while (i_ < text_.size()) {
      out.push_back(read_one());
      skip_space();
    }
    return out;
  }

 private:
  std::string_view text_;
  const std::string &source_;
  size_t i_ = 0;
  SourcePos pos_;

  [[noreturn]] void error(SourcePos at, const std::string &msg)
  {
    throw ParseError(ParseErrorKind::Syntax, at, msg, source_);
  }

  void advance()
  {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  void skip_space()
  {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') {
          advance();
        }
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_one()
  {
    SExpr e;
    e.pos = pos_;
    char c = text_[i_];
    if (c == ')') {
      error(pos_, "unexpected ')'");
    }
    if (c == '(') {
      advance();
      skip_space();
      while (true) {
        if (i_ >= text_.size()) {
          error(e.pos, "unterminated list, expected ')'");
        }
        if (text_[i_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read_one());
        skip_space();
      }
      return e;
    }
    e.is_atom = true;
    if (c == '|') {
      advance();
      while (i_ < text_.size() && text_[i_] != '|') {
        e.atom.push_back(text_[i_]);
        advance();
      }
      if (i_ >= text_.size()) {
        error(e.pos, "unterminated quoted symbol, expected '|'");
      }
      advance();
      return e;
    }
    if (c == '"') {
      e.atom.push_back('"');
      advance();
      while (i_ < text_.size() && text_[i_] != '"') {
        e.atom.push_back(text_[i_]);
        advance();
      }
      if (i_ >= text_.size()) {
        error(e.pos, "unterminated string literal");
      }
      e.atom.push_back('"');
      advance();
      return e;
    }
    while (i_ < text_.size()) {
      c = text_[i_];
      if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t'
          || c == '\n' || c == '\r') {
        break;
      }
      e.atom.push_back(c);
      advance();
    }
    return e;
  }
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text, const std::string &source)
{
  return Reader(text, source).read_all();
}

}  // namespace kindmc
