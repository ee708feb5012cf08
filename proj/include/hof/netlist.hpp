#pragma once

#include <string>

#include "hof/circuit.hpp"
#include "hof/errors.hpp"

namespace hof {

struct NotFirstOrder : CircuitError {
  NotFirstOrder(std::string terminal_name, const Ty& found)
      : CircuitError("not first order at " + terminal_name + " : " + to_string(found)),
        terminal(std::move(terminal_name)),
        ty(found) {}
  std::string terminal;
  Ty ty;
};

// Deterministic flat netlist of a fully elaborated circuit:
//   hofnetlist 1
//   source sha256:<hex of the canonical program text>
//   board <id> <kind> : <type>      (ascending id)
//   link <id>.<path> -> <id>.<path> (sorted)
//   root <id>.<path>
// Throws NotFirstOrder if anything above order 1 (or any unexpanded
// shell) is still present.
std::string emit_netlist(const Circuit& c);

// DOT rendering; works on partially elaborated circuits too. Boards that
// came from the same expansion stage share a cluster.
std::string emit_dot(const Circuit& c);

std::string sha256_hex(const std::string& data);

}  // namespace hof
