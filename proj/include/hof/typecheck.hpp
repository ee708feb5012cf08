#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hof/errors.hpp"
#include "hof/parser.hpp"
#include "hof/term.hpp"
#include "hof/type.hpp"

namespace hof {

struct TypeError : Error {
  TypeError(std::string msg, SrcLoc where) : Error(std::move(msg)), loc(where) {}

  static TypeError mismatch(const Ty& expected, const Ty& found, SrcLoc where);
  static TypeError unbound(const std::string& name, SrcLoc where);

  Ty expected, found;   // set for mismatches
  std::string name;     // set for unbound variables
  SrcLoc loc;
};

// Returns the unique type of a closed term, or throws TypeError.
// Typing is deterministic: identical terms always yield identical types.
Ty typecheck(const TermPtr& t);

// Typechecks under an explicit scope (innermost binding last).
Ty typecheck_in(const TermPtr& t, const std::vector<std::pair<std::string, Ty>>& scope);

// Checks each definition against its annotation, inlines definitions into
// later bodies and into main, and returns the linked main term.
TermPtr link_program(const Program& p);

}  // namespace hof
