#include "hof/rewrite.hpp"

#include <sstream>

#include "hof/typecheck.hpp"

namespace hof {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Beta: return "BETA";
    case Rule::PairFst: return "PAIR-FST";
    case Rule::PairSnd: return "PAIR-SND";
    case Rule::PrBase: return "PR-BASE";
    case Rule::PrStep: return "PR-STEP";
    case Rule::IterBase: return "ITER-BASE";
    case Rule::IterStep: return "ITER-STEP";
    case Rule::Comp: return "COMP";
    case Rule::DeltaSucc: return "DELTA-SUCC";
    case Rule::DeltaAdd: return "DELTA-ADD";
    case Rule::DeltaId: return "DELTA-ID";
  }
  return "?";
}

namespace {

using Redex = std::optional<std::pair<Rule, TermPtr>>;

// Splits an application spine: t = head a1 a2 ... an.
TermPtr spine(const TermPtr& t, std::vector<TermPtr>& args) {
  TermPtr head = t;
  while (head->kind == Term::Kind::App) {
    args.push_back(head->b);
    head = head->a;
  }
  std::reverse(args.begin(), args.end());
  return head;
}

TermPtr apply_all(TermPtr head, const std::vector<TermPtr>& args, size_t from = 0) {
  for (size_t i = from; i < args.size(); ++i) head = app(head, args[i]);
  return head;
}

// A rewrite rule applying at the root of t, if any.
Redex root_rule(const TermPtr& t) {
  if (t->kind == Term::Kind::Fst && t->a->kind == Term::Kind::Pair) {
    return {{Rule::PairFst, t->a->a}};
  }
  if (t->kind == Term::Kind::Snd && t->a->kind == Term::Kind::Pair) {
    return {{Rule::PairSnd, t->a->b}};
  }
  if (t->kind != Term::Kind::App) return std::nullopt;

  const TermPtr& fun = t->a;
  const TermPtr& arg = t->b;
  if (fun->kind == Term::Kind::Lam) {
    return {{Rule::Beta, substitute(fun->a, fun->name, arg)}};
  }
  if (fun->kind == Term::Kind::Id) {
    return {{Rule::DeltaId, arg}};
  }
  if (fun->kind == Term::Kind::Succ && arg->kind == Term::Kind::Lit) {
    return {{Rule::DeltaSucc, lit(arg->nat + 1)}};
  }
  if (fun->kind == Term::Kind::App) {
    const TermPtr& inner = fun->a;
    const TermPtr& first = fun->b;
    // add fires only once both arguments are literals.
    if (inner->kind == Term::Kind::Add && first->kind == Term::Kind::Lit &&
        arg->kind == Term::Kind::Lit) {
      return {{Rule::DeltaAdd, lit(first->nat + arg->nat)}};
    }
    // comp[A,B,C] (g, h) x  ->  h (g x)
    if (inner->kind == Term::Kind::Comp && first->kind == Term::Kind::Pair) {
      return {{Rule::Comp, app(first->b, app(first->a, arg))}};
    }
  }

  std::vector<TermPtr> args;
  TermPtr head = spine(t, args);
  if (head->kind == Term::Kind::Iter && args.size() == 3 && args[0]->kind == Term::Kind::Lit) {
    if (args[0]->nat == 1) {
      return {{Rule::IterBase, args[2]}};
    }
    TermPtr prev = lit(args[0]->nat - 1);
    TermPtr rec = app(app(app(head, prev), args[1]), args[2]);
    return {{Rule::IterStep, app(app(args[1], prev), rec)}};
  }
  if (head->kind == Term::Kind::PR && args.size() == head->nat + 1 &&
      args[0]->kind == Term::Kind::Lit) {
    if (args[0]->nat == 1) {
      return {{Rule::PrBase, apply_all(head->a, args, 1)}};
    }
    TermPtr prev = lit(args[0]->nat - 1);
    std::vector<TermPtr> rec_args = args;
    rec_args[0] = prev;
    TermPtr rec = apply_all(head, rec_args);
    TermPtr out = app(app(head->b, prev), rec);
    return {{Rule::PrStep, apply_all(out, args, 1)}};
  }
  return std::nullopt;
}

TermPtr rebuild(const TermPtr& t, const TermPtr& child_a, const TermPtr& child_b) {
  Term copy = *t;
  copy.a = child_a;
  copy.b = child_b;
  return std::make_shared<const Term>(std::move(copy));
}

Redex find(const TermPtr& t) {
  if (auto r = root_rule(t)) return r;
  // No rule at the root: recurse left to right, outermost first.
  if (t->a) {
    if (auto r = find(t->a)) {
      return {{r->first, rebuild(t, r->second, t->b)}};
    }
  }
  if (t->b) {
    if (auto r = find(t->b)) {
      return {{r->first, rebuild(t, t->a, r->second)}};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<Rule, TermPtr>> step(const TermPtr& t) { return find(t); }

Trace normalize(const TermPtr& t, std::uint64_t fuel, bool record) {
  Trace trace;
  TermPtr current = t;
  for (std::uint64_t used = 0;; ++used) {
    auto next = step(current);
    if (!next) break;
    if (used >= fuel) throw FuelExhausted(used, print_canonical(current));
    if (record) trace.steps.push_back({next->first, current, next->second});
    current = next->second;
  }
  // A closed normal form of type N must be a numeral; anything else left
  // unreduced means a missing rule.
  if (current->kind != Term::Kind::Lit && typecheck(current).is_nat()) {
    throw StuckTerm(print_canonical(current));
  }
  trace.final = current;
  return trace;
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    out << "step " << (i + 1) << " [" << rule_name(trace.steps[i].rule)
        << "]: " << print_canonical(trace.steps[i].before) << "\n";
  }
  out << "normal: " << print_canonical(trace.final) << "\n";
  return out.str();
}

}  // namespace hof
