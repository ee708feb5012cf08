#pragma once

#include <memory>
#include <string>

namespace hof {

// Type expressions: the base type N, function arrows, binary products.
// Values are immutable and cheap to copy (shared nodes), so they can be
// passed around and shared across concurrent evaluations freely.
class Ty {
 public:
  enum class Kind { Nat, Arrow, Prod };

  Ty() = default;  // null; every exposed Ty is non-null

  static Ty nat();
  static Ty arrow(Ty dom, Ty cod);
  static Ty prod(Ty left, Ty right);

  Kind kind() const { return node_->kind; }
  bool is_nat() const { return node_->kind == Kind::Nat; }
  bool is_arrow() const { return node_->kind == Kind::Arrow; }
  bool is_prod() const { return node_->kind == Kind::Prod; }

  // Arrow accessors.
  const Ty& dom() const { return node_->a; }
  const Ty& cod() const { return node_->b; }
  // Prod accessors.
  const Ty& left() const { return node_->a; }
  const Ty& right() const { return node_->b; }

  explicit operator bool() const { return node_ != nullptr; }

 private:
  struct Node {
    Kind kind;
    Ty a, b;
  };
  explicit Ty(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// Structural (syntactic) equality; no subtyping, no type variables.
bool type_equal(const Ty& a, const Ty& b);

inline bool operator==(const Ty& a, const Ty& b) { return type_equal(a, b); }
inline bool operator!=(const Ty& a, const Ty& b) { return !type_equal(a, b); }

// order(N) = 0
// order((A ; B)) = max(order(A), order(B))
// order(A -> B) = max(order(A) + 1, order(B))
int order(const Ty& t);

// Concrete syntax: `N`, `A -> B` (right-associative, arrow domains
// parenthesized), `(A ; B)`. Reparsing the result yields an equal Ty.
std::string to_string(const Ty& t);

}  // namespace hof
