#include "hof/typecheck.hpp"

#include <utility>
#include <vector>

namespace hof {

TypeError TypeError::mismatch(const Ty& expected, const Ty& found, SrcLoc where) {
  TypeError e("type mismatch at " + std::to_string(where.line) + ":" + std::to_string(where.col) +
                  ": expected " + to_string(expected) + ", found " + to_string(found),
              where);
  e.expected = expected;
  e.found = found;
  return e;
}

TypeError TypeError::unbound(const std::string& name, SrcLoc where) {
  TypeError e("unbound variable '" + name + "' at " + std::to_string(where.line) + ":" +
                  std::to_string(where.col),
              where);
  e.name = name;
  return e;
}

namespace {

// N -> N -> ... -> N with `args` argument positions.
Ty curried_nat(std::uint64_t args) {
  Ty t = Ty::nat();
  for (std::uint64_t i = 0; i < args; ++i) t = Ty::arrow(Ty::nat(), t);
  return t;
}

using Scope = std::vector<std::pair<std::string, Ty>>;

Ty check(const TermPtr& t, Scope& scope) {
  switch (t->kind) {
    case Term::Kind::Lit:
      if (t->nat < 1) throw TypeError("numeral below 1", t->loc);
      return Ty::nat();
    case Term::Kind::Var: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        if (it->first == t->name) return it->second;
      }
      throw TypeError::unbound(t->name, t->loc);
    }
    case Term::Kind::Lam: {
      scope.emplace_back(t->name, t->ty);
      Ty body = check(t->a, scope);
      scope.pop_back();
      return Ty::arrow(t->ty, body);
    }
    case Term::Kind::App: {
      Ty fun = check(t->a, scope);
      Ty arg = check(t->b, scope);
      if (!fun.is_arrow()) {
        throw TypeError("applied a non-function of type " + to_string(fun) + " at " +
                            std::to_string(t->loc.line) + ":" + std::to_string(t->loc.col),
                        t->loc);
      }
      if (fun.dom() != arg) throw TypeError::mismatch(fun.dom(), arg, t->b->loc);
      return fun.cod();
    }
    case Term::Kind::Pair:
      return Ty::prod(check(t->a, scope), check(t->b, scope));
    case Term::Kind::Fst: {
      Ty p = check(t->a, scope);
      if (!p.is_prod()) {
        throw TypeError("fst applied to non-pair of type " + to_string(p), t->loc);
      }
      return p.left();
    }
    case Term::Kind::Snd: {
      Ty p = check(t->a, scope);
      if (!p.is_prod()) {
        throw TypeError("snd applied to non-pair of type " + to_string(p), t->loc);
      }
      return p.right();
    }
    case Term::Kind::Succ:
      return Ty::arrow(Ty::nat(), Ty::nat());
    case Term::Kind::Add:
      return curried_nat(2);
    case Term::Kind::Id:
      return Ty::arrow(t->ty, t->ty);
    case Term::Kind::PR: {
      Ty h = check(t->a, scope);
      Ty g = check(t->b, scope);
      Ty want_h = curried_nat(t->nat);
      Ty want_g = curried_nat(t->nat + 2);
      if (h != want_h) throw TypeError::mismatch(want_h, h, t->a->loc);
      if (g != want_g) throw TypeError::mismatch(want_g, g, t->b->loc);
      return curried_nat(t->nat + 1);
    }
    case Term::Kind::Iter: {
      const Ty& a = t->ty;
      Ty step = Ty::arrow(a, a);
      return Ty::arrow(Ty::nat(), Ty::arrow(Ty::arrow(Ty::nat(), step), step));
    }
    case Term::Kind::Comp: {
      Ty in = Ty::prod(Ty::arrow(t->ty, t->ty2), Ty::arrow(t->ty2, t->ty3));
      return Ty::arrow(in, Ty::arrow(t->ty, t->ty3));
    }
  }
  throw TypeError("malformed term", t->loc);
}

}  // namespace

Ty typecheck(const TermPtr& t) {
  Scope scope;
  return check(t, scope);
}

Ty typecheck_in(const TermPtr& t, const std::vector<std::pair<std::string, Ty>>& scope) {
  Scope s = scope;
  return check(t, s);
}

TermPtr link_program(const Program& p) {
  std::vector<std::pair<std::string, TermPtr>> linked;
  for (const Def& d : p.defs) {
    TermPtr body = d.body;
    for (auto it = linked.rbegin(); it != linked.rend(); ++it) {
      body = substitute(body, it->first, it->second);
    }
    Ty got = typecheck(body);
    if (got != d.annot) throw TypeError::mismatch(d.annot, got, d.loc);
    linked.emplace_back(d.name, body);
  }
  TermPtr m = p.main_term;
  for (auto it = linked.rbegin(); it != linked.rend(); ++it) {
    m = substitute(m, it->first, it->second);
  }
  return m;
}

}  // namespace hof
