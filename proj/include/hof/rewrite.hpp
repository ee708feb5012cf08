#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hof/errors.hpp"
#include "hof/term.hpp"

namespace hof {

enum class Rule {
  Beta,
  PairFst,
  PairSnd,
  PrBase,
  PrStep,
  IterBase,
  IterStep,
  Comp,
  DeltaSucc,
  DeltaAdd,
  DeltaId,
};

const char* rule_name(Rule r);

struct RewriteStep {
  Rule rule;
  TermPtr before;
  TermPtr after;
};

// A complete reduction: consecutive entries chain (after of step i is
// before of step i+1) and `final` is a normal form.
struct Trace {
  std::vector<RewriteStep> steps;
  TermPtr final;
};

// Thrown when a well-typed term is neither reducible nor a recognized
// normal form; indicates an engine bug, not a user error.
struct StuckTerm : Error {
  explicit StuckTerm(std::string term_text)
      : Error("stuck term: " + term_text), term(std::move(term_text)) {}
  std::string term;
};

// Performs exactly one leftmost-outermost rewrite, or returns nothing if
// the term is a normal form.
std::optional<std::pair<Rule, TermPtr>> step(const TermPtr& t);

// Iterates `step` to normal form. When `record` is false the trace holds
// only the final term (used by bulk runs that do not inspect steps).
Trace normalize(const TermPtr& t, std::uint64_t fuel, bool record = true);

// One line per step (`step <k> [<rule>]: <term before the step>`)
// followed by `normal: <final term>`; together the lines list the whole
// rewrite chain in order.
std::string format_trace(const Trace& trace);

}  // namespace hof
