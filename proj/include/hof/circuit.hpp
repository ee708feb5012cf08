#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hof/errors.hpp"
#include "hof/term.hpp"
#include "hof/type.hpp"

namespace hof {

// ---------------------------------------------------------------------------
// Ports
//
// A board's interface is the port tree of its type with plug polarity at
// the root: N is a single wire terminal, a product keeps polarity on both
// sides, and an arrow flips polarity on its domain. Paths address subtrees;
// the empty path names the whole interface (rendered "out" on wire boards).
// ---------------------------------------------------------------------------

enum class PortStep : std::uint8_t { In, Out, L, R };
enum class Polarity : std::uint8_t { Plug, Socket };

struct Path {
  std::vector<PortStep> steps;

  Path() = default;
  Path(std::initializer_list<PortStep> s) : steps(s) {}

  Path plus(PortStep s) const;
  Path plus(const Path& rest) const;
  bool spine() const;           // all steps are Out
  std::size_t spine_depth() const { return steps.size(); }
  std::string str() const;      // "out" when empty; components in/out/0/1

  friend bool operator==(const Path& a, const Path& b) { return a.steps == b.steps; }
  friend bool operator<(const Path& a, const Path& b) { return a.steps < b.steps; }
};

struct PortRef {
  std::uint32_t board = 0;
  Path path;

  std::string str() const { return std::to_string(board) + "." + path.str(); }

  friend bool operator==(const PortRef& a, const PortRef& b) {
    return a.board == b.board && a.path == b.path;
  }
  friend bool operator<(const PortRef& a, const PortRef& b) {
    if (a.board != b.board) return a.board < b.board;
    return a.path < b.path;
  }
};

// Subtree type of `t` at `path`.
Ty type_at(const Ty& t, const Path& path);
// Polarity at `path` within a plug-rooted interface.
Polarity polarity_at(const Path& path);
// Preorder wire-terminal paths of the port tree of `t`.
std::vector<Path> leaf_paths(const Ty& t);

// ---------------------------------------------------------------------------
// Boards, links, values
// ---------------------------------------------------------------------------

enum class BoardKind {
  PrimSucc,
  PrimAdd,
  PrimId,
  Lit,
  LambdaShell,
  CompBoard,
  IterShell,
  PrShell,
  Pair,
  Proj,
};

std::string kind_name(BoardKind k, std::uint64_t lit = 0);

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Reference to a board interface subtree (spine positions only: the value
// of the board itself, or of the board applied to its first j arguments).
struct RefVal {
  PortRef at;
};

struct PairVal {
  ValuePtr first, second;
};

// Composite function realized by wiring rather than by a single board:
// an argument is delivered by applying `fn` (whose own output is already
// wired up), and the composite's result is `out`.
struct FnVal {
  std::uint64_t id = 0;  // consumption identity
  ValuePtr fn;
  ValuePtr out;
};

struct Value : std::variant<std::monostate, RefVal, PairVal, FnVal> {
  using variant::variant;
};

Value make_pair_value(Value l, Value r);

struct Board {
  std::uint32_t id = 0;
  BoardKind kind{};
  Ty type;
  std::uint64_t lit = 0;  // Lit payload

  // LambdaShell payload: body instantiated at expansion time.
  std::string binder;
  TermPtr body;
  std::map<std::string, Value> env;

  // PrShell payload.
  Value pr_h, pr_g;
  std::uint64_t pr_k = 0;

  // Proj payload.
  Value proj_src;
  bool proj_snd = false;

  // Pair payload.
  Value pair_l, pair_r;

  // Arguments delivered so far, in spine order.
  std::vector<Value> args;

  // Elaboration context that created the board ("iter3.stage2" etc.);
  // drives DOT clustering and the stage-count laws.
  std::string group;

  bool retired = false;
};

struct Event {
  enum class Kind { Board, Link, Expand };
  Kind kind{};
  std::uint32_t board = 0;
  BoardKind bkind{};
  Ty type;                         // Board events
  PortRef from, to;                // Link events
  std::optional<std::uint64_t> n;  // Expand events with a resolved count
};

std::string format_event(const Event& e);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct CircuitError : Error {
  using Error::Error;
};

struct LinkTypeMismatch : CircuitError {
  LinkTypeMismatch(const Ty& expected_ty, const Ty& found_ty)
      : CircuitError("link type mismatch: expected " + to_string(expected_ty) + ", found " +
                     to_string(found_ty)),
        expected(expected_ty),
        found(found_ty) {}
  Ty expected, found;
};

struct SocketOccupied : CircuitError {
  explicit SocketOccupied(const PortRef& t)
      : CircuitError("socket already linked: " + t.str()), terminal(t) {}
  PortRef terminal;
};

struct UnresolvedCount : CircuitError {
  explicit UnresolvedCount(std::string detail)
      : CircuitError("iteration count is not a literal: " + std::move(detail)) {}
};

struct DanglingSocket : CircuitError {
  explicit DanglingSocket(const PortRef& t)
      : CircuitError("dangling socket: " + t.str()), terminal(t) {}
  PortRef terminal;
};

struct CycleDetected : CircuitError {
  explicit CycleDetected(const PortRef& t)
      : CircuitError("wire cycle through " + t.str()), terminal(t) {}
  PortRef terminal;
};

// ---------------------------------------------------------------------------
// Circuit
// ---------------------------------------------------------------------------

class Circuit {
 public:
  // Builds the initial circuit for a closed well-typed term: one board per
  // constructor outside lambda bodies, applications as link establishment.
  // No evaluation happens.
  static Circuit instantiate(const TermPtr& t);

  // Instantiates an extra closed term into this circuit (test harnesses
  // compose circuits from pieces this way) and returns its value.
  Value add_term(const TermPtr& t);

  // Establishes the application links between a function value and an
  // argument value: one link per wire-terminal pair of the argument type,
  // so a base-typed argument is 1 link and an (N -> N) argument is 2.
  // Returns the application's value.
  Value apply_links(const Value& fun, const Value& arg);

  // Links the output of `first` (A -> B) to the input of `second`
  // (B -> C); the returned composite exposes first's input and second's
  // output as a function of type A -> C.
  Value compose_link(const Value& first, const Value& second);

  // Reconfigures until only first-order wiring is reachable from the root:
  // shells expand (iteration counts are resolved to literals first) and
  // unreachable boards are swept. Each expansion consumes one unit of fuel.
  void elaborate(std::uint64_t fuel = 1'000'000);

  // Topological dataflow evaluation of the elaborated N-typed circuit.
  std::uint64_t run() const;

  const Value& root() const { return root_; }
  const std::vector<Board>& boards() const { return boards_; }
  const std::vector<Event>& event_log() const { return log_; }
  const std::string& canonical_source() const { return source_; }

  // Live (non-retired, non-swept) boards, ascending id.
  std::vector<const Board*> live_boards() const;
  // Live links as (from, to), sorted.
  std::vector<std::pair<PortRef, PortRef>> links() const;

  // The wire terminal that carries the program's principal output.
  PortRef root_terminal() const;

  Ty value_type(const Value& v) const;
  Value resolve(const Value& v) const;

 private:
  using Env = std::map<std::string, Value>;

  std::uint32_t new_board(BoardKind kind, Ty type);
  Board& board(std::uint32_t id) { return boards_[id]; }
  const Board& board(std::uint32_t id) const { return boards_[id]; }

  Value inst(const TermPtr& t, const Env& env);
  Ty term_type(const TermPtr& t, const Env& env) const;

  Value take(const Value& v);
  void unmark(const Value& v);
  Value copy_value(const RefVal& v);
  Value copy_arg(const Value& v);

  void add_link(const PortRef& from, const PortRef& to);
  PortRef arg_terminal(const Value& arg, const Path& leaf) const;
  void wire_argument(const Value& arg, const PortRef& fun_in);

  bool expandable(const Board& b) const;
  bool ready(const Board& b) const;
  bool padable(const Board& b) const;
  void expand(std::uint32_t id);
  Value apply_taken(const Value& fun_resolved, const Value& arg_taken);
  std::uint64_t literize(const Value& count);
  std::uint64_t eval_forcing(PortRef t, int depth);
  PairVal force_to_pair(Value v);
  std::uint32_t pad_board();
  Value fn_value(Value fn, Value out);

  std::uint64_t wire_value(const PortRef& terminal, std::map<PortRef, std::uint64_t>& memo,
                           std::set<PortRef>& in_progress) const;
  PortRef principal_terminal(const Value& v) const;
  std::set<std::uint32_t> reach() const;
  void sweep();

  std::string current_group() const;

  std::vector<Board> boards_;
  std::map<PortRef, PortRef> driver_;    // to -> from; sockets have one driver
  std::vector<Event> log_;
  std::map<PortRef, Value> forwards_;    // retired shell results
  std::set<PortRef> consumed_;           // wired function/pair value positions
  std::set<std::uint64_t> consumed_fn_;  // wired composite values
  std::vector<std::string> group_ctx_;
  std::set<std::uint32_t> swept_;
  Value root_;
  std::string source_;
  std::uint64_t fuel_ = 0;
  std::uint64_t next_fn_id_ = 1;
};

}  // namespace hof
