#include "hof/generator.hpp"

#include <functional>

namespace hof {

namespace {

Ty curried_nat(std::uint64_t args) {
  Ty t = Ty::nat();
  for (std::uint64_t i = 0; i < args; ++i) t = Ty::arrow(Ty::nat(), t);
  return t;
}

// Is t of shape N -> ... -> N? Returns the argument count.
bool curried_shape(const Ty& t, std::uint64_t& args) {
  Ty cur = t;
  args = 0;
  while (cur.is_arrow()) {
    if (!cur.dom().is_nat()) return false;
    ++args;
    cur = cur.cod();
  }
  return cur.is_nat();
}

}  // namespace

std::uint64_t ProgramGenerator::pick(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

bool ProgramGenerator::chance(int percent) {
  return pick(100) < static_cast<std::uint64_t>(percent);
}

std::string ProgramGenerator::fresh_name() { return "x" + std::to_string(var_counter_++); }

Ty ProgramGenerator::pick_small_type() {
  return chance(70) ? Ty::nat() : Ty::arrow(Ty::nat(), Ty::nat());
}

TermPtr ProgramGenerator::next() {
  Scope scope;
  var_counter_ = 0;
  return gen_nat(cfg_.max_depth, scope);
}

TermPtr ProgramGenerator::minimal(const Ty& target, const Scope& scope) {
  // Prefer an in-scope variable half of the time.
  std::vector<const std::string*> candidates;
  for (const auto& [name, ty] : scope) {
    if (ty == target) candidates.push_back(&name);
  }
  if (!candidates.empty() && chance(50)) {
    return var(*candidates[pick(candidates.size())]);
  }
  switch (target.kind()) {
    case Ty::Kind::Nat:
      return lit(1 + pick(cfg_.max_count));
    case Ty::Kind::Arrow: {
      if (target.dom() == target.cod()) return id_at(target.dom());
      if (target == curried_nat(1)) return succ();
      std::string x = fresh_name();
      Scope inner = scope;
      inner.emplace_back(x, target.dom());
      return lam(x, target.dom(), minimal(target.cod(), inner));
    }
    case Ty::Kind::Prod:
      return pair(minimal(target.left(), scope), minimal(target.right(), scope));
  }
  return lit(1);
}

TermPtr ProgramGenerator::count_term(int depth, const Scope& scope) {
  if (depth >= 2 && chance(25)) return gen_nat(depth - 2, scope);
  return lit(1 + pick(cfg_.max_count));
}

TermPtr ProgramGenerator::gen(const Ty& target, int depth, const Scope& scope) {
  if (depth <= 0) return minimal(target, scope);
  switch (target.kind()) {
    case Ty::Kind::Nat:
      return gen_nat(depth, scope);
    case Ty::Kind::Arrow:
      return gen_arrow(target, depth, scope);
    case Ty::Kind::Prod:
      return pair(gen(target.left(), depth - 1, scope), gen(target.right(), depth - 1, scope));
  }
  return minimal(target, scope);
}

TermPtr ProgramGenerator::gen_nat(int depth, const Scope& scope) {
  if (depth <= 0) return minimal(Ty::nat(), scope);

  std::vector<const std::string*> nat_vars;
  for (const auto& [name, ty] : scope) {
    if (ty.is_nat()) nat_vars.push_back(&name);
  }

  std::vector<std::pair<int, std::function<TermPtr()>>> options;
  options.emplace_back(18, [&] { return lit(1 + pick(cfg_.max_count)); });
  if (!nat_vars.empty()) {
    options.emplace_back(12, [&] { return var(*nat_vars[pick(nat_vars.size())]); });
  }
  options.emplace_back(12, [&] { return app(succ(), gen_nat(depth - 1, scope)); });
  options.emplace_back(12, [&] {
    return app(app(add(), gen_nat(depth - 1, scope)), gen_nat(depth - 1, scope));
  });
  options.emplace_back(4, [&] { return app(id_at(Ty::nat()), gen_nat(depth - 1, scope)); });
  // comp[A,B,N] (f, g) x
  options.emplace_back(20, [&] {
    Ty a = pick_small_type();
    Ty b = pick_small_type();
    TermPtr f = gen(Ty::arrow(a, b), depth - 1, scope);
    TermPtr g = gen(Ty::arrow(b, Ty::nat()), depth - 1, scope);
    return app(app(comp(a, b, Ty::nat()), pair(f, g)), gen(a, depth - 1, scope));
  });
  // pr[k](h, g) n x1..xk
  options.emplace_back(10, [&] {
    std::uint64_t k = pick(2);
    TermPtr h = gen(curried_nat(k), depth - 1, scope);
    TermPtr g = gen(curried_nat(k + 2), depth - 1, scope);
    TermPtr t = app(pr(h, g, k), count_term(depth, scope));
    for (std::uint64_t j = 0; j < k; ++j) t = app(t, gen_nat(depth - 1, scope));
    return t;
  });
  // iter[A] n c a (applied through to N)
  options.emplace_back(10, [&] {
    Ty a = chance(75) ? Ty::nat() : Ty::arrow(Ty::nat(), Ty::nat());
    TermPtr c = gen(Ty::arrow(Ty::nat(), Ty::arrow(a, a)), depth - 1, scope);
    TermPtr t = app(app(app(iter(a), count_term(depth, scope)), c), gen(a, depth - 1, scope));
    if (a.is_arrow()) t = app(t, gen_nat(depth - 1, scope));
    return t;
  });
  // (\x:T. body) arg
  options.emplace_back(8, [&] {
    Ty t = pick_small_type();
    std::string x = fresh_name();
    Scope inner = scope;
    inner.emplace_back(x, t);
    return app(lam(x, t, gen_nat(depth - 1, inner)), gen(t, depth - 1, scope));
  });
  // fst/snd of a pair (one component is dead circuitry)
  options.emplace_back(4, [&] {
    Ty other = pick_small_type();
    TermPtr n = gen_nat(depth - 1, scope);
    TermPtr o = gen(other, depth - 1, scope);
    return chance(50) ? fst(pair(n, o)) : snd(pair(o, n));
  });

  int total = 0;
  for (const auto& [w, f] : options) total += w;
  int roll = static_cast<int>(pick(static_cast<std::uint64_t>(total)));
  for (const auto& [w, f] : options) {
    if (roll < w) return f();
    roll -= w;
  }
  return lit(1);
}

TermPtr ProgramGenerator::gen_arrow(const Ty& target, int depth, const Scope& scope) {
  std::vector<const std::string*> vars;
  for (const auto& [name, ty] : scope) {
    if (ty == target) vars.push_back(&name);
  }

  std::vector<std::pair<int, std::function<TermPtr()>>> options;
  if (!vars.empty()) {
    options.emplace_back(12, [&] { return var(*vars[pick(vars.size())]); });
  }
  if (target == curried_nat(1)) {
    options.emplace_back(15, [&] { return succ(); });
  }
  if (target == curried_nat(2)) {
    options.emplace_back(8, [&] { return add(); });
  }
  if (target.dom() == target.cod()) {
    options.emplace_back(8, [&] { return id_at(target.dom()); });
    // iter[A] n c : A -> A
    options.emplace_back(8, [&] {
      TermPtr c = gen(Ty::arrow(Ty::nat(), target), depth - 1, scope);
      return app(app(iter(target.dom()), count_term(depth, scope)), c);
    });
  }
  options.emplace_back(30, [&] {
    std::string x = fresh_name();
    Scope inner = scope;
    inner.emplace_back(x, target.dom());
    return lam(x, target.dom(), gen(target.cod(), depth - 1, inner));
  });
  // comp[A,C,B] (f, g) : A -> B
  options.emplace_back(14, [&] {
    Ty c = pick_small_type();
    TermPtr f = gen(Ty::arrow(target.dom(), c), depth - 1, scope);
    TermPtr g = gen(Ty::arrow(c, target.cod()), depth - 1, scope);
    return app(comp(target.dom(), c, target.cod()), pair(f, g));
  });
  std::uint64_t args = 0;
  if (curried_shape(target, args) && args >= 1) {
    // partially applied primitive recursion: pr[args-1](h, g)
    options.emplace_back(6, [&] {
      TermPtr h = gen(curried_nat(args - 1), depth - 1, scope);
      TermPtr g = gen(curried_nat(args + 1), depth - 1, scope);
      return pr(h, g, args - 1);
    });
  }

  int total = 0;
  for (const auto& [w, f] : options) total += w;
  int roll = static_cast<int>(pick(static_cast<std::uint64_t>(total)));
  for (const auto& [w, f] : options) {
    if (roll < w) return f();
    roll -= w;
  }
  return minimal(target, scope);
}

}  // namespace hof
