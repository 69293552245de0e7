#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "kindmc/ir.h"
#include "kindmc/sexpr.h"

namespace kindmc {

/** Parses a `.kts` document:
 *
 *    (system
 *      (var <name> (bv <w>) | bool)*
 *      (input <name> (bv <w>) | bool)*
 *      (init <bool-expr>)
 *      (trans <bool-expr>)
 *      (prop <name> <bool-expr>)+
 *      (halt <bool-expr>))
 *
 *  Decimal literals take their width from the surrounding expression;
 *  `#x..`, `#b..` and `(_ bvN W)` carry their own. Every error is a
 *  ParseError carrying the source position of the offending form. */
TransitionSystem parse_system(std::string_view text,
                              const std::string &source = "<input>");

/// throws ParseError(Io) when the file cannot be read
TransitionSystem parse_file(const std::filesystem::path &path);

/// inverse of parse_system up to whitespace and literal spelling
std::string print_system(const TransitionSystem &sys);
std::string print_expr(const Expr &e);
std::string print_sort(const Sort &s);

}  // namespace kindmc
