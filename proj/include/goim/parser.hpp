#pragma once

#include <stdexcept>
#include <string>

#include "goim/term.hpp"

namespace goim {

struct ParseError : std::runtime_error {
  size_t pos;  // byte offset into the input
  ParseError(const std::string& msg, size_t p)
      : std::runtime_error(msg + " (at offset " + std::to_string(p) + ")"), pos(p) {}
};

// Grammar:
//   t ::= x | \x. t | t t | t @need t | t @lv t | t @rv t | ( t )
// Identifiers [a-zA-Z][a-zA-Z0-9_]*, juxtaposition left-associative with the
// given default strategy, \x. extends maximally right. The result is pure,
// in Barendregt form (duplicate binders are alpha-renamed), and uses one
// application strategy throughout; anything else throws ParseError.
TermPtr parse(const std::string& text, Strategy defaultStrategy);

}  // namespace goim
