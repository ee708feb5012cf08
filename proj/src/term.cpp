#include "hof/term.hpp"

#include <utility>

namespace hof {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermPtr lit(std::uint64_t n) {
  Term t{Term::Kind::Lit};
  t.nat = n;
  return make(std::move(t));
}

TermPtr var(std::string name) {
  Term t{Term::Kind::Var};
  t.name = std::move(name);
  return make(std::move(t));
}

TermPtr lam(std::string name, Ty annot, TermPtr body) {
  Term t{Term::Kind::Lam};
  t.name = std::move(name);
  t.ty = std::move(annot);
  t.a = std::move(body);
  return make(std::move(t));
}

TermPtr app(TermPtr fun, TermPtr arg) {
  Term t{Term::Kind::App};
  t.a = std::move(fun);
  t.b = std::move(arg);
  return make(std::move(t));
}

TermPtr pair(TermPtr l, TermPtr r) {
  Term t{Term::Kind::Pair};
  t.a = std::move(l);
  t.b = std::move(r);
  return make(std::move(t));
}

TermPtr fst(TermPtr c) {
  Term t{Term::Kind::Fst};
  t.a = std::move(c);
  return make(std::move(t));
}

TermPtr snd(TermPtr c) {
  Term t{Term::Kind::Snd};
  t.a = std::move(c);
  return make(std::move(t));
}

TermPtr succ() {
  static const TermPtr s = make(Term{Term::Kind::Succ});
  return s;
}

TermPtr add() {
  static const TermPtr s = make(Term{Term::Kind::Add});
  return s;
}

TermPtr id_at(Ty t) {
  Term n{Term::Kind::Id};
  n.ty = std::move(t);
  return make(std::move(n));
}

TermPtr pr(TermPtr h, TermPtr g, std::uint64_t k) {
  Term t{Term::Kind::PR};
  t.a = std::move(h);
  t.b = std::move(g);
  t.nat = k;
  return make(std::move(t));
}

TermPtr iter(Ty at) {
  Term t{Term::Kind::Iter};
  t.ty = std::move(at);
  return make(std::move(t));
}

TermPtr comp(Ty a, Ty b, Ty c) {
  Term t{Term::Kind::Comp};
  t.ty = std::move(a);
  t.ty2 = std::move(b);
  t.ty3 = std::move(c);
  return make(std::move(t));
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Lit:
      return a->nat == b->nat;
    case Term::Kind::Var:
      return a->name == b->name;
    case Term::Kind::Lam:
      return a->name == b->name && a->ty == b->ty && term_equal(a->a, b->a);
    case Term::Kind::App:
    case Term::Kind::Pair:
      return term_equal(a->a, b->a) && term_equal(a->b, b->b);
    case Term::Kind::Fst:
    case Term::Kind::Snd:
      return term_equal(a->a, b->a);
    case Term::Kind::Succ:
    case Term::Kind::Add:
      return true;
    case Term::Kind::Id:
    case Term::Kind::Iter:
      return a->ty == b->ty;
    case Term::Kind::PR:
      return a->nat == b->nat && term_equal(a->a, b->a) && term_equal(a->b, b->b);
    case Term::Kind::Comp:
      return a->ty == b->ty && a->ty2 == b->ty2 && a->ty3 == b->ty3;
  }
  return false;
}

namespace {

void collect_free(const TermPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case Term::Kind::Lam: {
      bool fresh = bound.insert(t->name).second;
      collect_free(t->a, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    default:
      if (t->a) collect_free(t->a, bound, out);
      if (t->b) collect_free(t->b, bound, out);
      return;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base;
  while (avoid.count(candidate)) candidate += '\'';
  return candidate;
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& replacement) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->name == name ? replacement : t;
    case Term::Kind::Lam: {
      if (t->name == name) return t;  // shadowed
      std::set<std::string> fv = free_vars(replacement);
      if (fv.count(t->name)) {
        // The binder would capture a free variable of the replacement.
        std::set<std::string> avoid = fv;
        auto body_fv = free_vars(t->a);
        avoid.insert(body_fv.begin(), body_fv.end());
        avoid.insert(name);
        std::string renamed = fresh_name(t->name, avoid);
        TermPtr body = substitute(t->a, t->name, var(renamed));
        return lam(renamed, t->ty, substitute(body, name, replacement));
      }
      TermPtr body = substitute(t->a, name, replacement);
      return body == t->a ? t : lam(t->name, t->ty, body);
    }
    default: {
      TermPtr na = t->a ? substitute(t->a, name, replacement) : nullptr;
      TermPtr nb = t->b ? substitute(t->b, name, replacement) : nullptr;
      if (na == t->a && nb == t->b) return t;
      Term copy = *t;
      copy.a = na;
      copy.b = nb;
      return make(std::move(copy));
    }
  }
}

std::string print_canonical(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Lit:
      return std::to_string(t->nat);
    case Term::Kind::Var:
      return t->name;
    case Term::Kind::Lam:
      return "(\\" + t->name + ":" + to_string(t->ty) + ". " + print_canonical(t->a) + ")";
    case Term::Kind::App:
      return "(" + print_canonical(t->a) + " " + print_canonical(t->b) + ")";
    case Term::Kind::Pair:
      return "(" + print_canonical(t->a) + ", " + print_canonical(t->b) + ")";
    case Term::Kind::Fst:
      return "(fst " + print_canonical(t->a) + ")";
    case Term::Kind::Snd:
      return "(snd " + print_canonical(t->a) + ")";
    case Term::Kind::Succ:
      return "succ";
    case Term::Kind::Add:
      return "add";
    case Term::Kind::Id:
      return "id[" + to_string(t->ty) + "]";
    case Term::Kind::PR:
      return "pr[" + std::to_string(t->nat) + "](" + print_canonical(t->a) + ", " +
             print_canonical(t->b) + ")";
    case Term::Kind::Iter:
      return "iter[" + to_string(t->ty) + "]";
    case Term::Kind::Comp:
      return "comp[" + to_string(t->ty) + "," + to_string(t->ty2) + "," + to_string(t->ty3) + "]";
  }
  return {};
}

}  // namespace hof
