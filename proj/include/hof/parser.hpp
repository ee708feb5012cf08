#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hof/errors.hpp"
#include "hof/term.hpp"
#include "hof/type.hpp"

namespace hof {

struct ParseError : Error {
  ParseError(std::string msg, int line, int col, std::vector<std::string> expected_tokens)
      : Error(std::move(msg)), line(line), col(col), expected(std::move(expected_tokens)) {}

  int line;
  int col;
  std::vector<std::string> expected;
};

struct Def {
  std::string name;
  Ty annot;
  TermPtr body;
  SrcLoc loc;
};

// A `.hof` source file: zero or more `def name : type = term` followed by
// `main = term`. Definitions are closed apart from earlier definitions.
struct Program {
  std::vector<Def> defs;
  TermPtr main_term;
};

Ty parse_type(std::string_view src);
TermPtr parse_term(std::string_view src);
Program parse_program(std::string_view src);

}  // namespace hof
