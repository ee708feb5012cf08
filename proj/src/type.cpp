#include "hof/type.hpp"

#include <algorithm>

namespace hof {

Ty Ty::nat() {
  static const auto node = std::make_shared<const Node>(Node{Kind::Nat, {}, {}});
  return Ty(node);
}

Ty Ty::arrow(Ty dom, Ty cod) {
  return Ty(std::make_shared<const Node>(Node{Kind::Arrow, std::move(dom), std::move(cod)}));
}

Ty Ty::prod(Ty left, Ty right) {
  return Ty(std::make_shared<const Node>(Node{Kind::Prod, std::move(left), std::move(right)}));
}

bool type_equal(const Ty& a, const Ty& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Ty::Kind::Nat:
      return true;
    case Ty::Kind::Arrow:
      return type_equal(a.dom(), b.dom()) && type_equal(a.cod(), b.cod());
    case Ty::Kind::Prod:
      return type_equal(a.left(), b.left()) && type_equal(a.right(), b.right());
  }
  return false;
}

int order(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Nat:
      return 0;
    case Ty::Kind::Prod:
      return std::max(order(t.left()), order(t.right()));
    case Ty::Kind::Arrow:
      return std::max(order(t.dom()) + 1, order(t.cod()));
  }
  return 0;
}

std::string to_string(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Nat:
      return "N";
    case Ty::Kind::Arrow: {
      std::string dom = to_string(t.dom());
      if (t.dom().is_arrow()) dom = "(" + dom + ")";
      return dom + " -> " + to_string(t.cod());
    }
    case Ty::Kind::Prod:
      return "(" + to_string(t.left()) + " ; " + to_string(t.right()) + ")";
  }
  return {};
}

}  // namespace hof
