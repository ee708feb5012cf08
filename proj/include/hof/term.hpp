#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "hof/type.hpp"

namespace hof {

struct SrcLoc {
  int line = 0;
  int col = 0;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Combinator/lambda AST. Terms are immutable after construction; rewriting
// builds new spines that share unchanged subterms.
struct Term {
  enum class Kind {
    Lit,   // numeral, n >= 1
    Var,
    Lam,   // \x:T. body
    App,   // juxtaposition, left-associative
    Pair,
    Fst,
    Snd,
    Succ,  // succ : N -> N
    Add,   // add : N -> N -> N
    Id,    // id[T] : T -> T
    PR,    // pr[k](h, g): primitive recursion with k parameters
    Iter,  // iter[A] : N -> (N -> (A -> A)) -> (A -> A)
    Comp,  // comp[A,B,C] : ((A -> B) ; (B -> C)) -> (A -> C)
  };

  Kind kind;
  std::uint64_t nat = 0;  // Lit value; PR parameter count k
  std::string name;       // Var name; Lam binder
  Ty ty, ty2, ty3;        // Lam annotation; Id/Iter instantiation; Comp A,B,C
  TermPtr a, b;           // Lam body; App fun/arg; Pair l/r; Fst/Snd child; PR h/g
  SrcLoc loc;
};

TermPtr lit(std::uint64_t n);
TermPtr var(std::string name);
TermPtr lam(std::string name, Ty annot, TermPtr body);
TermPtr app(TermPtr fun, TermPtr arg);
TermPtr pair(TermPtr l, TermPtr r);
TermPtr fst(TermPtr t);
TermPtr snd(TermPtr t);
TermPtr succ();
TermPtr add();
TermPtr id_at(Ty t);
TermPtr pr(TermPtr h, TermPtr g, std::uint64_t k);
TermPtr iter(Ty at);
TermPtr comp(Ty a, Ty b, Ty c);

// Structural equality; source locations are ignored.
bool term_equal(const TermPtr& a, const TermPtr& b);

std::set<std::string> free_vars(const TermPtr& t);

// Capture-avoiding substitution of `replacement` for free occurrences of
// `name`. Binders that would capture a free variable of the replacement
// are renamed with primes (x, x', x'', ...).
TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& replacement);

// Deterministic fully parenthesized rendering; reparsing yields an equal
// term. Examples: `5`, `(succ 1)`, `(\x:N. x)`, `pr[0](1, g)`.
std::string print_canonical(const TermPtr& t);

}  // namespace hof
