#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kindmc {

struct SourcePos
{
  int line = 1;
  int column = 1;
};

enum class ParseErrorKind
{
  Syntax,
  Sort,
  Undeclared,
  Duplicate,
  NextOutsideTrans,
  InputOutsideTrans,
  MissingSection,
  Io
};

std::string_view to_string(ParseErrorKind k);

class ParseError : public std::runtime_error
{
 public:
  ParseError(ParseErrorKind kind, SourcePos pos, const std::string &msg,
             const std::string &source = "<input>");

  ParseErrorKind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }

 private:
  ParseErrorKind kind_;
  SourcePos pos_;
};

/// s-expression: either an atom or a list; `|quoted|` symbols lose their bars
struct SExpr
{
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_list() const { return !is_atom; }
  bool is(std::string_view a) const { return is_atom && atom == a; }
  std::string to_string() const;
};

/// reads every top-level s-expression; ';' starts a line comment
std::vector<SExpr> read_sexprs(std::string_view text,
                               const std::string &source = "<input>");

}  // namespace kindmc
