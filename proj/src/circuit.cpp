#include "hof/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "hof/typecheck.hpp"

namespace hof {

// ---------------------------------------------------------------------------
// Paths and port trees
// ---------------------------------------------------------------------------

Path Path::plus(PortStep s) const {
  Path p = *this;
  p.steps.push_back(s);
  return p;
}

Path Path::plus(const Path& rest) const {
  Path p = *this;
  p.steps.insert(p.steps.end(), rest.steps.begin(), rest.steps.end());
  return p;
}

bool Path::spine() const {
  return std::all_of(steps.begin(), steps.end(), [](PortStep s) { return s == PortStep::Out; });
}

std::string Path::str() const {
  if (steps.empty()) return "out";
  std::string out;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    switch (steps[i]) {
      case PortStep::In: out += "in"; break;
      case PortStep::Out: out += "out"; break;
      case PortStep::L: out += '0'; break;
      case PortStep::R: out += '1'; break;
    }
  }
  return out;
}

Ty type_at(const Ty& t, const Path& path) {
  Ty cur = t;
  for (PortStep s : path.steps) {
    switch (s) {
      case PortStep::In: cur = cur.dom(); break;
      case PortStep::Out: cur = cur.cod(); break;
      case PortStep::L: cur = cur.left(); break;
      case PortStep::R: cur = cur.right(); break;
    }
  }
  return cur;
}

Polarity polarity_at(const Path& path) {
  size_t flips = static_cast<size_t>(
      std::count(path.steps.begin(), path.steps.end(), PortStep::In));
  return flips % 2 == 0 ? Polarity::Plug : Polarity::Socket;
}

namespace {

void collect_leaves(const Ty& t, const Path& at, std::vector<Path>& out) {
  switch (t.kind()) {
    case Ty::Kind::Nat:
      out.push_back(at);
      return;
    case Ty::Kind::Arrow:
      collect_leaves(t.dom(), at.plus(PortStep::In), out);
      collect_leaves(t.cod(), at.plus(PortStep::Out), out);
      return;
    case Ty::Kind::Prod:
      collect_leaves(t.left(), at.plus(PortStep::L), out);
      collect_leaves(t.right(), at.plus(PortStep::R), out);
      return;
  }
}

Path tail_of(const Path& p) {
  Path rest;
  rest.steps.assign(p.steps.begin() + 1, p.steps.end());
  return rest;
}

}  // namespace

std::vector<Path> leaf_paths(const Ty& t) {
  std::vector<Path> out;
  collect_leaves(t, Path{}, out);
  return out;
}

// ---------------------------------------------------------------------------
// Boards, events
// ---------------------------------------------------------------------------

std::string kind_name(BoardKind k, std::uint64_t lit) {
  switch (k) {
    case BoardKind::PrimSucc: return "PRIM-SUCC";
    case BoardKind::PrimAdd: return "PRIM-ADD";
    case BoardKind::PrimId: return "PRIM-ID";
    case BoardKind::Lit: return "LIT(" + std::to_string(lit) + ")";
    case BoardKind::LambdaShell: return "LAMBDA-SHELL";
    case BoardKind::CompBoard: return "COMP-BOARD";
    case BoardKind::IterShell: return "ITER-SHELL";
    case BoardKind::PrShell: return "PR-SHELL";
    case BoardKind::Pair: return "PAIR";
    case BoardKind::Proj: return "PROJ";
  }
  return "?";
}

std::string format_event(const Event& e) {
  switch (e.kind) {
    case Event::Kind::Board:
      return "board " + std::to_string(e.board) + " " + kind_name(e.bkind, e.n.value_or(0)) +
             " : " + to_string(e.type);
    case Event::Kind::Link:
      return "link " + e.from.str() + " -> " + e.to.str();
    case Event::Kind::Expand: {
      std::string line = "expand " + std::to_string(e.board) + " " + kind_name(e.bkind);
      if (e.bkind == BoardKind::IterShell || e.bkind == BoardKind::PrShell) {
        line += " n=" + std::to_string(e.n.value_or(0));
      }
      return line;
    }
  }
  return {};
}

Value make_pair_value(Value l, Value r) {
  return PairVal{std::make_shared<const Value>(std::move(l)),
                 std::make_shared<const Value>(std::move(r))};
}

Value Circuit::fn_value(Value fn, Value out) {
  FnVal f;
  f.id = next_fn_id_++;
  f.fn = std::make_shared<const Value>(std::move(fn));
  f.out = std::make_shared<const Value>(std::move(out));
  return f;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

std::string Circuit::current_group() const {
  std::string g;
  for (size_t i = 0; i < group_ctx_.size(); ++i) {
    if (i) g += '/';
    g += group_ctx_[i];
  }
  return g;
}

std::uint32_t Circuit::new_board(BoardKind kind, Ty type) {
  Board b;
  b.id = static_cast<std::uint32_t>(boards_.size());
  b.kind = kind;
  b.type = std::move(type);
  b.group = current_group();
  boards_.push_back(std::move(b));
  Event e;
  e.kind = Event::Kind::Board;
  e.board = boards_.back().id;
  e.bkind = kind;
  e.type = boards_.back().type;
  log_.push_back(std::move(e));
  return boards_.back().id;
}

Circuit Circuit::instantiate(const TermPtr& t) {
  Circuit c;
  c.source_ = print_canonical(t);
  c.root_ = c.add_term(t);
  return c;
}

Value Circuit::add_term(const TermPtr& t) {
  typecheck(t);  // precondition: closed and well-typed
  return inst(t, {});
}

Ty Circuit::term_type(const TermPtr& t, const Env& env) const {
  std::vector<std::pair<std::string, Ty>> scope;
  for (const auto& [name, v] : env) scope.emplace_back(name, value_type(v));
  return typecheck_in(t, scope);
}

Value Circuit::inst(const TermPtr& t, const Env& env) {
  switch (t->kind) {
    case Term::Kind::Lit: {
      std::uint32_t b = new_board(BoardKind::Lit, Ty::nat());
      board(b).lit = t->nat;
      return RefVal{{b, {}}};
    }
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw CircuitError("unbound variable during instantiation: " + t->name);
      return it->second;
    }
    case Term::Kind::Lam: {
      Ty whole = term_type(t, env);
      std::uint32_t b = new_board(BoardKind::LambdaShell, whole);
      Board& sh = board(b);
      sh.binder = t->name;
      sh.body = t->a;
      auto fv = free_vars(t->a);
      for (const std::string& name : fv) {
        if (name == t->name) continue;
        auto it = env.find(name);
        if (it == env.end()) throw CircuitError("unbound capture: " + name);
        sh.env.emplace(name, it->second);
      }
      return RefVal{{b, {}}};
    }
    case Term::Kind::App: {
      Value f = inst(t->a, env);
      Value x = inst(t->b, env);
      return apply_links(f, x);
    }
    case Term::Kind::Pair: {
      Value l = inst(t->a, env);
      Value r = inst(t->b, env);
      Ty ty = Ty::prod(value_type(l), value_type(r));
      std::uint32_t b = new_board(BoardKind::Pair, std::move(ty));
      board(b).pair_l = std::move(l);
      board(b).pair_r = std::move(r);
      return RefVal{{b, {}}};
    }
    case Term::Kind::Fst:
    case Term::Kind::Snd: {
      Value src = inst(t->a, env);
      Ty pt = value_type(src);
      if (!pt.is_prod()) throw CircuitError("projection from non-pair of type " + to_string(pt));
      bool is_snd = t->kind == Term::Kind::Snd;
      std::uint32_t b = new_board(BoardKind::Proj, is_snd ? pt.right() : pt.left());
      board(b).proj_src = std::move(src);
      board(b).proj_snd = is_snd;
      return RefVal{{b, {}}};
    }
    case Term::Kind::Succ:
      return RefVal{{new_board(BoardKind::PrimSucc, Ty::arrow(Ty::nat(), Ty::nat())), {}}};
    case Term::Kind::Add:
      return RefVal{
          {new_board(BoardKind::PrimAdd, Ty::arrow(Ty::nat(), Ty::arrow(Ty::nat(), Ty::nat()))),
           {}}};
    case Term::Kind::Id:
      return RefVal{{new_board(BoardKind::PrimId, Ty::arrow(t->ty, t->ty)), {}}};
    case Term::Kind::PR: {
      Value h = inst(t->a, env);
      Value g = inst(t->b, env);
      Ty ty = Ty::nat();
      for (std::uint64_t i = 0; i < t->nat + 1; ++i) ty = Ty::arrow(Ty::nat(), ty);
      std::uint32_t b = new_board(BoardKind::PrShell, std::move(ty));
      board(b).pr_h = std::move(h);
      board(b).pr_g = std::move(g);
      board(b).pr_k = t->nat;
      return RefVal{{b, {}}};
    }
    case Term::Kind::Iter: {
      Ty step = Ty::arrow(t->ty, t->ty);
      Ty ty = Ty::arrow(Ty::nat(), Ty::arrow(Ty::arrow(Ty::nat(), step), step));
      return RefVal{{new_board(BoardKind::IterShell, std::move(ty)), {}}};
    }
    case Term::Kind::Comp: {
      Ty in = Ty::prod(Ty::arrow(t->ty, t->ty2), Ty::arrow(t->ty2, t->ty3));
      Ty ty = Ty::arrow(std::move(in), Ty::arrow(t->ty, t->ty3));
      return RefVal{{new_board(BoardKind::CompBoard, std::move(ty)), {}}};
    }
  }
  throw CircuitError("malformed term");
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

Ty Circuit::value_type(const Value& v) const {
  if (const auto* r = std::get_if<RefVal>(&v)) {
    return type_at(board(r->at.board).type, r->at.path);
  }
  if (const auto* p = std::get_if<PairVal>(&v)) {
    return Ty::prod(value_type(*p->first), value_type(*p->second));
  }
  if (const auto* f = std::get_if<FnVal>(&v)) {
    return Ty::arrow(value_type(*f->fn).dom(), value_type(*f->out));
  }
  throw CircuitError("empty value");
}

namespace {

Value project(const Value& v, PortStep s) {
  if (const auto* r = std::get_if<RefVal>(&v)) {
    return RefVal{{r->at.board, r->at.path.plus(s)}};
  }
  if (const auto* p = std::get_if<PairVal>(&v)) {
    if (s == PortStep::L) return *p->first;
    if (s == PortStep::R) return *p->second;
  }
  if (const auto* f = std::get_if<FnVal>(&v)) {
    if (s == PortStep::Out) return *f->out;
  }
  throw CircuitError("cannot project value");
}

}  // namespace

Value Circuit::resolve(const Value& v) const {
  Value cur = v;
  for (std::uint64_t guard = 0; guard < 10'000'000; ++guard) {
    const auto* r = std::get_if<RefVal>(&cur);
    if (!r) return cur;
    auto it = forwards_.find(r->at);
    if (it != forwards_.end()) {
      cur = it->second;
      continue;
    }
    if (!board(r->at.board).retired) return cur;
    // Retired board without an exact entry: find the longest forwarded
    // prefix and project the remaining steps into its value.
    PortRef probe = r->at;
    bool jumped = false;
    while (!probe.path.steps.empty()) {
      PortStep last = probe.path.steps.back();
      probe.path.steps.pop_back();
      auto pit = forwards_.find(probe);
      if (pit != forwards_.end()) {
        Path rest;
        rest.steps.assign(r->at.path.steps.begin() + static_cast<long>(probe.path.steps.size()),
                          r->at.path.steps.end());
        Value projected = pit->second;
        for (PortStep s : rest.steps) projected = project(projected, s);
        cur = projected;
        jumped = true;
        break;
      }
      (void)last;
    }
    if (!jumped) return cur;  // unexpanded position of a retired board
  }
  throw CycleDetected(std::get<RefVal>(v).at);
}

Value Circuit::take(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return v;
  if (const auto* r = std::get_if<RefVal>(&v)) {
    if (value_type(v).is_nat()) return v;  // wires fan out freely
    if (consumed_.count(r->at)) {
      Value copy = copy_value(*r);
      consumed_.insert(std::get<RefVal>(copy).at);
      return copy;
    }
    consumed_.insert(r->at);
    return v;
  }
  if (const auto* p = std::get_if<PairVal>(&v)) {
    return make_pair_value(take(*p->first), take(*p->second));
  }
  const auto& f = std::get<FnVal>(v);
  if (consumed_fn_.count(f.id)) {
    throw CircuitError("composite function value used twice");
  }
  consumed_fn_.insert(f.id);
  return v;
}

void Circuit::unmark(const Value& v) {
  if (const auto* r = std::get_if<RefVal>(&v)) {
    consumed_.erase(r->at);
    return;
  }
  if (const auto* p = std::get_if<PairVal>(&v)) {
    unmark(*p->first);
    unmark(*p->second);
    return;
  }
  if (const auto* f = std::get_if<FnVal>(&v)) consumed_fn_.erase(f->id);
}

// A structural copy of the board behind `v`, replaying the arguments the
// original had received up to v's spine depth. Shared N wires stay shared;
// function- and pair-valued arguments are copied so the duplicate owns its
// own sub-circuit.
Value Circuit::copy_value(const RefVal& v) {
  if (!v.at.path.spine()) throw CircuitError("cannot copy interior port " + v.at.str());
  const Board src = board(v.at.board);  // copy: new_board may reallocate
  std::uint32_t nb = new_board(src.kind, src.type);
  Board& dst = board(nb);
  dst.lit = src.lit;
  dst.binder = src.binder;
  dst.body = src.body;
  dst.env = src.env;
  dst.pr_h = src.pr_h;
  dst.pr_g = src.pr_g;
  dst.pr_k = src.pr_k;
  dst.proj_src = src.proj_src;
  dst.proj_snd = src.proj_snd;
  dst.pair_l = src.pair_l;
  dst.pair_r = src.pair_r;
  Value cur = RefVal{{nb, {}}};
  for (size_t i = 0; i < v.at.path.spine_depth(); ++i) {
    cur = apply_links(cur, copy_arg(src.args[i]));
  }
  return cur;
}

// Fresh cone for a replayed argument: N wires are shared (fan-out is
// free), everything else is duplicated.
Value Circuit::copy_arg(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return v;
  if (const auto* r = std::get_if<RefVal>(&v)) {
    if (value_type(v).is_nat()) return v;
    return copy_value(*r);
  }
  if (const auto* p = std::get_if<PairVal>(&v)) {
    return make_pair_value(copy_arg(*p->first), copy_arg(*p->second));
  }
  throw CircuitError("cannot copy a composite argument");
}

// ---------------------------------------------------------------------------
// Linking
// ---------------------------------------------------------------------------

void Circuit::add_link(const PortRef& from, const PortRef& to) {
  if (!type_at(board(from.board).type, from.path).is_nat() ||
      !type_at(board(to.board).type, to.path).is_nat()) {
    throw LinkTypeMismatch(Ty::nat(), type_at(board(to.board).type, to.path));
  }
  if (driver_.count(to)) throw SocketOccupied(to);
  driver_[to] = from;
  Event e;
  e.kind = Event::Kind::Link;
  e.from = from;
  e.to = to;
  log_.push_back(std::move(e));
}

PortRef Circuit::arg_terminal(const Value& arg, const Path& leaf) const {
  Value v = resolve(arg);
  if (const auto* r = std::get_if<RefVal>(&v)) {
    return {r->at.board, r->at.path.plus(leaf)};
  }
  if (leaf.steps.empty()) throw CircuitError("structured value has no wire terminal");
  PortStep head = leaf.steps.front();
  Path rest = tail_of(leaf);
  if (const auto* p = std::get_if<PairVal>(&v)) {
    if (head == PortStep::L) return arg_terminal(*p->first, rest);
    if (head == PortStep::R) return arg_terminal(*p->second, rest);
    throw CircuitError("pair value addressed with a non-pair path");
  }
  const auto& f = std::get<FnVal>(v);
  if (head == PortStep::Out) return arg_terminal(*f.out, rest);
  // Domain side: the open input of the composite's first stage.
  Value fn = resolve(*f.fn);
  while (const auto* nested = std::get_if<FnVal>(&fn)) fn = resolve(*nested->fn);
  const auto& fr = std::get<RefVal>(fn);
  return {fr.at.board, fr.at.path.plus(PortStep::In).plus(rest)};
}

void Circuit::wire_argument(const Value& arg, const PortRef& fun_in) {
  Ty t1 = type_at(board(fun_in.board).type, fun_in.path);
  for (const Path& q : leaf_paths(t1)) {
    PortRef fun_term{fun_in.board, fun_in.path.plus(q)};
    PortRef arg_term = arg_terminal(arg, q);
    if (polarity_at(fun_term.path) == Polarity::Plug) {
      add_link(fun_term, arg_term);
    } else {
      add_link(arg_term, fun_term);
    }
  }
}

Value Circuit::apply_taken(const Value& fun_resolved, const Value& arg_taken) {
  if (const auto* r = std::get_if<RefVal>(&fun_resolved)) {
    Board& b = board(r->at.board);
    wire_argument(arg_taken, {r->at.board, r->at.path.plus(PortStep::In)});
    if (b.args.size() != r->at.path.spine_depth()) {
      throw CircuitError("out-of-order application on board " + std::to_string(b.id));
    }
    b.args.push_back(arg_taken);
    return RefVal{{r->at.board, r->at.path.plus(PortStep::Out)}};
  }
  if (const auto* f = std::get_if<FnVal>(&fun_resolved)) {
    apply_taken(resolve(*f->fn), arg_taken);
    return *f->out;
  }
  throw CircuitError("cannot apply a pair value");
}

Value Circuit::apply_links(const Value& fun, const Value& arg) {
  Value f = take(fun);
  Value fr = resolve(f);
  Ty ft = value_type(fr);
  if (!ft.is_arrow()) {
    throw LinkTypeMismatch(Ty::arrow(value_type(arg), Ty::nat()), ft);
  }
  Ty got = value_type(arg);
  if (got != ft.dom()) throw LinkTypeMismatch(ft.dom(), got);
  Value a = take(arg);
  return apply_taken(fr, a);
}

Value Circuit::compose_link(const Value& first, const Value& second) {
  Value f = take(first);
  Value fr = resolve(f);
  Ty ft = value_type(fr);
  Ty gt = value_type(second);
  if (!ft.is_arrow() || !gt.is_arrow()) {
    throw LinkTypeMismatch(ft, gt);
  }
  if (gt.dom() != ft.cod()) throw LinkTypeMismatch(ft.cod(), gt.dom());
  Value f_out;
  if (const auto* r = std::get_if<RefVal>(&fr)) {
    f_out = RefVal{{r->at.board, r->at.path.plus(PortStep::Out)}};
  } else if (const auto* c = std::get_if<FnVal>(&fr)) {
    f_out = *c->out;
  } else {
    throw LinkTypeMismatch(ft, gt);
  }
  Value out = apply_links(second, f_out);
  return fn_value(f, std::move(out));
}

// ---------------------------------------------------------------------------
// Elaboration
// ---------------------------------------------------------------------------

bool Circuit::expandable(const Board& b) const {
  switch (b.kind) {
    case BoardKind::LambdaShell:
    case BoardKind::IterShell:
    case BoardKind::PrShell:
    case BoardKind::CompBoard:
    case BoardKind::Pair:
    case BoardKind::Proj:
      return true;
    case BoardKind::PrimId:
      return order(b.type) > 1;
    default:
      return false;
  }
}

bool Circuit::ready(const Board& b) const {
  switch (b.kind) {
    case BoardKind::LambdaShell: return !b.args.empty();
    case BoardKind::IterShell: return b.args.size() >= 2;
    case BoardKind::PrShell: return !b.args.empty();
    case BoardKind::CompBoard: return !b.args.empty();
    case BoardKind::Pair:
    case BoardKind::Proj:
      return true;
    case BoardKind::PrimId: return !b.args.empty();
    default: return false;
  }
}

bool Circuit::padable(const Board& b) const {
  // An unapplied lambda over a wire binder gets an open input junction, so
  // first-order functions still flatten to a netlist with input pads.
  return b.kind == BoardKind::LambdaShell && b.args.empty() && b.type.dom().is_nat();
}

std::uint32_t Circuit::pad_board() {
  return new_board(BoardKind::PrimId, Ty::arrow(Ty::nat(), Ty::nat()));
}

PairVal Circuit::force_to_pair(Value v) {
  for (std::uint64_t guard = 0; guard < 1'000'000; ++guard) {
    v = resolve(v);
    if (const auto* p = std::get_if<PairVal>(&v)) return *p;
    const auto* r = std::get_if<RefVal>(&v);
    if (!r) break;
    const Board& b = board(r->at.board);
    if (!b.retired && expandable(b) && ready(b)) {
      expand(r->at.board);
      continue;
    }
    break;
  }
  throw CircuitError("pair input did not resolve to a pair");
}

std::uint64_t Circuit::eval_forcing(PortRef t, int depth) {
  if (depth > 100'000) throw CycleDetected(t);
  for (std::uint64_t guard = 0;; ++guard) {
    if (guard > 1'000'000) throw CycleDetected(t);
    Value v = resolve(Value(RefVal{t}));
    const auto* r = std::get_if<RefVal>(&v);
    if (!r) throw UnresolvedCount(t.str());
    t = r->at;
    const Board& b = board(t.board);
    if (expandable(b) && !b.retired) {
      if (!ready(b)) throw UnresolvedCount(t.str());
      expand(t.board);
      continue;
    }
    break;
  }
  auto it = driver_.find(t);
  if (it != driver_.end()) return eval_forcing(it->second, depth + 1);
  const Board& b = board(t.board);
  const auto& steps = t.path.steps;
  if (b.kind == BoardKind::Lit && steps.empty()) return b.lit;
  if (b.kind == BoardKind::PrimSucc && t.path == Path{PortStep::Out}) {
    return eval_forcing({t.board, {PortStep::In}}, depth + 1) + 1;
  }
  if (b.kind == BoardKind::PrimAdd && t.path == Path{PortStep::Out, PortStep::Out}) {
    return eval_forcing({t.board, {PortStep::In}}, depth + 1) +
           eval_forcing({t.board, {PortStep::Out, PortStep::In}}, depth + 1);
  }
  if (b.kind == BoardKind::PrimId && t.path == Path{PortStep::Out}) {
    return eval_forcing({t.board, {PortStep::In}}, depth + 1);
  }
  throw UnresolvedCount("no driver at " + t.str());
}

std::uint64_t Circuit::literize(const Value& count) {
  Value v = resolve(count);
  const auto* r = std::get_if<RefVal>(&v);
  if (!r) throw UnresolvedCount("count is not a wire");
  std::uint64_t n = eval_forcing(r->at, 0);
  if (n < 1) throw UnresolvedCount("count below 1");
  return n;
}

void Circuit::expand(std::uint32_t id) {
  if (fuel_ == 0) throw FuelExhausted(0, "");
  --fuel_;
  const Board data = board(id);  // snapshot

  // Dissolve every link touching this board. Result wires at spine
  // terminals are remembered and re-established from the expansion.
  std::vector<std::pair<Path, PortRef>> outgoing;
  for (auto it = driver_.begin(); it != driver_.end();) {
    const PortRef& to = it->first;
    const PortRef& from = it->second;
    if (from.board == id || to.board == id) {
      if (from.board == id && to.board != id && from.path.spine()) {
        outgoing.emplace_back(from.path, to);
      }
      it = driver_.erase(it);
    } else {
      ++it;
    }
  }
  for (const Value& a : data.args) unmark(a);
  board(id).retired = true;

  std::vector<std::string> saved_ctx = group_ctx_;
  group_ctx_.clear();
  {
    std::string cur;
    for (char c : data.group) {
      if (c == '/') {
        group_ctx_.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) group_ctx_.push_back(cur);
  }

  auto spine_path = [](size_t depth) {
    Path p;
    p.steps.assign(depth, PortStep::Out);
    return p;
  };
  auto emit_expand = [&](std::optional<std::uint64_t> n) {
    Event e;
    e.kind = Event::Kind::Expand;
    e.board = id;
    e.bkind = data.kind;
    e.n = n;
    log_.push_back(std::move(e));
  };

  switch (data.kind) {
    case BoardKind::LambdaShell: {
      emit_expand(std::nullopt);
      if (data.args.empty()) {
        // Unapplied first-order function: synthesize an input junction.
        std::uint32_t pad = pad_board();
        Env env = data.env;
        env[data.binder] = RefVal{{pad, {PortStep::Out}}};
        Value r = inst(data.body, env);
        forwards_[{id, {}}] = fn_value(RefVal{{pad, {}}}, r);
        break;
      }
      Env env = data.env;
      env[data.binder] = data.args[0];
      Value r = inst(data.body, env);
      forwards_[{id, {PortStep::Out}}] = r;
      for (size_t i = 1; i < data.args.size(); ++i) {
        r = apply_links(r, data.args[i]);
        forwards_[{id, spine_path(i + 1)}] = r;
      }
      break;
    }
    case BoardKind::IterShell: {
      std::uint64_t n = literize(data.args[0]);
      emit_expand(n);
      std::vector<Value> stages;
      for (std::uint64_t i = 1; i < n; ++i) {
        group_ctx_.push_back("iter" + std::to_string(id) + ".stage" + std::to_string(i));
        std::uint32_t lit_b = new_board(BoardKind::Lit, Ty::nat());
        board(lit_b).lit = i;
        stages.push_back(apply_links(data.args[1], Value(RefVal{{lit_b, {}}})));
        group_ctx_.pop_back();
      }
      if (data.args.size() >= 3) {
        Value r = stages.empty() ? take(data.args[2]) : data.args[2];
        for (const Value& f : stages) r = apply_links(f, r);
        forwards_[{id, spine_path(3)}] = r;
      } else if (stages.empty()) {
        // n = 1: the iterate denotes the identity on A.
        const Ty& a = data.type.cod().cod().dom();
        std::uint32_t idb = new_board(BoardKind::PrimId, Ty::arrow(a, a));
        forwards_[{id, spine_path(2)}] = RefVal{{idb, {}}};
      } else {
        Value r = stages[0];
        for (size_t i = 1; i < stages.size(); ++i) r = compose_link(r, stages[i]);
        forwards_[{id, spine_path(2)}] = r;
      }
      break;
    }
    case BoardKind::PrShell: {
      std::uint64_t n = literize(data.args[0]);
      emit_expand(n);
      // Parameters x_1..x_k; missing trailing ones become open inputs.
      std::vector<Value> params;
      std::vector<std::uint32_t> pads;
      for (std::uint64_t j = 1; j <= data.pr_k; ++j) {
        if (j < data.args.size()) {
          params.push_back(data.args[j]);
        } else {
          std::uint32_t pad = pad_board();
          pads.push_back(pad);
          params.push_back(RefVal{{pad, {PortStep::Out}}});
        }
      }
      Value r = data.pr_h;
      for (const Value& p : params) r = apply_links(r, p);
      for (std::uint64_t i = 1; i + 1 <= n; ++i) {
        group_ctx_.push_back("pr" + std::to_string(id) + ".stage" + std::to_string(i));
        std::uint32_t lit_b = new_board(BoardKind::Lit, Ty::nat());
        board(lit_b).lit = i;
        Value g = apply_links(data.pr_g, Value(RefVal{{lit_b, {}}}));
        g = apply_links(g, r);
        for (const Value& p : params) g = apply_links(g, p);
        r = g;
        group_ctx_.pop_back();
      }
      // Chain open-input pads back onto the result for undelivered levels.
      Value val = r;
      for (size_t i = pads.size(); i > 0; --i) {
        val = fn_value(RefVal{{pads[i - 1], {}}}, val);
      }
      forwards_[{id, spine_path(data.args.size())}] = val;
      break;
    }
    case BoardKind::CompBoard: {
      emit_expand(std::nullopt);
      PairVal p = force_to_pair(data.args[0]);
      if (data.args.size() >= 2) {
        Value inner = apply_links(*p.first, data.args[1]);
        Value r = apply_links(*p.second, inner);
        forwards_[{id, spine_path(2)}] = r;
      } else {
        Value r = compose_link(*p.first, *p.second);
        forwards_[{id, {PortStep::Out}}] = r;
      }
      break;
    }
    case BoardKind::Pair: {
      emit_expand(std::nullopt);
      forwards_[{id, {}}] = make_pair_value(data.pair_l, data.pair_r);
      break;
    }
    case BoardKind::Proj: {
      emit_expand(std::nullopt);
      PairVal p = force_to_pair(data.proj_src);
      // Claim the projected component: a second projection of the same
      // side gets its own structural copy.
      Value r = take(data.proj_snd ? *p.second : *p.first);
      forwards_[{id, {}}] = r;
      for (size_t i = 0; i < data.args.size(); ++i) {
        r = apply_taken(resolve(r), take(data.args[i]));
        forwards_[{id, spine_path(i + 1)}] = r;
      }
      break;
    }
    case BoardKind::PrimId: {
      emit_expand(std::nullopt);
      Value r = data.args[0];
      forwards_[{id, {PortStep::Out}}] = r;
      for (size_t i = 1; i < data.args.size(); ++i) {
        r = apply_links(r, data.args[i]);
        forwards_[{id, spine_path(i + 1)}] = r;
      }
      break;
    }
    default:
      throw CircuitError("expansion of a primitive board");
  }

  group_ctx_ = saved_ctx;

  // Re-point wires that used to flow out of this board's spine terminals.
  for (const auto& [from_path, to] : outgoing) {
    Value v = resolve(Value(RefVal{{id, from_path}}));
    const auto* r = std::get_if<RefVal>(&v);
    if (!r) throw CircuitError("result wire did not resolve to a terminal");
    add_link(r->at, to);
  }
}

std::set<std::uint32_t> Circuit::reach() const {
  std::set<std::uint32_t> r;
  std::vector<Value> pending{root_};
  auto enqueue_board_deps = [&](const Board& b) {
    if (b.kind == BoardKind::LambdaShell) {
      for (const auto& [name, v] : b.env) pending.push_back(v);
    }
    pending.push_back(b.pr_h);
    pending.push_back(b.pr_g);
    pending.push_back(b.proj_src);
    pending.push_back(b.pair_l);
    pending.push_back(b.pair_r);
    for (const Value& a : b.args) pending.push_back(a);
  };
  auto add_board = [&](std::uint32_t id) {
    if (swept_.count(id) || board(id).retired) return;
    if (!r.insert(id).second) return;
    enqueue_board_deps(board(id));
  };
  auto drain = [&]() {
    while (!pending.empty()) {
      Value v = pending.back();
      pending.pop_back();
      if (std::holds_alternative<std::monostate>(v)) continue;
      v = resolve(v);
      if (const auto* ref = std::get_if<RefVal>(&v)) {
        add_board(ref->at.board);
      } else if (const auto* p = std::get_if<PairVal>(&v)) {
        pending.push_back(*p->first);
        pending.push_back(*p->second);
      } else if (const auto* f = std::get_if<FnVal>(&v)) {
        pending.push_back(*f->fn);
        pending.push_back(*f->out);
      }
    }
  };
  drain();
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [to, from] : driver_) {
      if (r.count(to.board) && !r.count(from.board)) {
        add_board(from.board);
        drain();
        changed = true;
      }
    }
  }
  return r;
}

void Circuit::sweep() {
  std::set<std::uint32_t> keep = reach();
  for (const Board& b : boards_) {
    if (!b.retired && !swept_.count(b.id) && !keep.count(b.id)) swept_.insert(b.id);
  }
  for (auto it = driver_.begin(); it != driver_.end();) {
    if (swept_.count(it->first.board) || swept_.count(it->second.board)) {
      it = driver_.erase(it);
    } else {
      ++it;
    }
  }
}

void Circuit::elaborate(std::uint64_t fuel) {
  fuel_ = fuel;
  for (;;) {
    std::set<std::uint32_t> demanded = reach();
    std::optional<std::uint32_t> next;
    for (std::uint32_t id : demanded) {
      const Board& b = board(id);
      if (expandable(b) && (ready(b) || padable(b))) {
        next = id;
        break;
      }
    }
    if (!next) break;
    expand(*next);
  }
  sweep();
}

// ---------------------------------------------------------------------------
// Dataflow evaluation
// ---------------------------------------------------------------------------

std::uint64_t Circuit::wire_value(const PortRef& terminal, std::map<PortRef, std::uint64_t>& memo,
                                  std::set<PortRef>& in_progress) const {
  PortRef t = terminal;
  Value v = resolve(Value(RefVal{t}));
  if (const auto* r = std::get_if<RefVal>(&v)) {
    t = r->at;
  } else {
    throw DanglingSocket(terminal);
  }
  auto hit = memo.find(t);
  if (hit != memo.end()) return hit->second;
  if (!in_progress.insert(t).second) throw CycleDetected(t);
  std::uint64_t result;
  auto drv = driver_.find(t);
  if (drv != driver_.end()) {
    result = wire_value(drv->second, memo, in_progress);
  } else {
    const Board& b = board(t.board);
    if (b.kind == BoardKind::Lit && t.path.steps.empty()) {
      result = b.lit;
    } else if (b.kind == BoardKind::PrimSucc && t.path == Path{PortStep::Out}) {
      result = wire_value({t.board, {PortStep::In}}, memo, in_progress) + 1;
    } else if (b.kind == BoardKind::PrimAdd && t.path == Path{PortStep::Out, PortStep::Out}) {
      result = wire_value({t.board, {PortStep::In}}, memo, in_progress) +
               wire_value({t.board, {PortStep::Out, PortStep::In}}, memo, in_progress);
    } else if (b.kind == BoardKind::PrimId && t.path == Path{PortStep::Out}) {
      result = wire_value({t.board, {PortStep::In}}, memo, in_progress);
    } else {
      throw DanglingSocket(t);
    }
  }
  in_progress.erase(t);
  memo[t] = result;
  return result;
}

std::uint64_t Circuit::run() const {
  Value v = resolve(root_);
  const auto* r = std::get_if<RefVal>(&v);
  if (!r || !value_type(v).is_nat()) {
    throw CircuitError("root is not a wire of type N");
  }
  std::map<PortRef, std::uint64_t> memo;
  std::set<PortRef> in_progress;
  return wire_value(r->at, memo, in_progress);
}

// ---------------------------------------------------------------------------
// Inspection
// ---------------------------------------------------------------------------

std::vector<const Board*> Circuit::live_boards() const {
  std::vector<const Board*> out;
  for (const Board& b : boards_) {
    if (!b.retired && !swept_.count(b.id)) out.push_back(&b);
  }
  return out;
}

std::vector<std::pair<PortRef, PortRef>> Circuit::links() const {
  std::vector<std::pair<PortRef, PortRef>> out;
  out.reserve(driver_.size());
  for (const auto& [to, from] : driver_) out.emplace_back(from, to);
  std::sort(out.begin(), out.end());
  return out;
}

PortRef Circuit::principal_terminal(const Value& value) const {
  Value v = resolve(value);
  if (const auto* r = std::get_if<RefVal>(&v)) {
    PortRef at = r->at;
    Ty ty = type_at(board(at.board).type, at.path);
    while (!ty.is_nat()) {
      if (ty.is_arrow()) {
        at.path = at.path.plus(PortStep::Out);
        ty = ty.cod();
      } else {
        at.path = at.path.plus(PortStep::L);
        ty = ty.left();
      }
    }
    return at;
  }
  if (const auto* p = std::get_if<PairVal>(&v)) return principal_terminal(*p->first);
  if (const auto* f = std::get_if<FnVal>(&v)) return principal_terminal(*f->out);
  throw CircuitError("circuit has no root value");
}

PortRef Circuit::root_terminal() const { return principal_terminal(root_); }

}  // namespace hof
