#include "hof/netlist.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <sstream>

namespace hof {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace {

bool first_order_kind(const Board& b) {
  switch (b.kind) {
    case BoardKind::Lit:
    case BoardKind::PrimSucc:
    case BoardKind::PrimAdd:
    case BoardKind::PrimId:
      return order(b.type) <= 1;
    default:
      return false;
  }
}

}  // namespace

std::string emit_netlist(const Circuit& c) {
  for (const Board* b : c.live_boards()) {
    if (!first_order_kind(*b)) {
      throw NotFirstOrder(std::to_string(b->id) + " " + kind_name(b->kind, b->lit), b->type);
    }
  }
  std::ostringstream out;
  out << "hofnetlist 1\n";
  out << "source sha256:" << sha256_hex(c.canonical_source()) << "\n";
  for (const Board* b : c.live_boards()) {
    out << "board " << b->id << " " << kind_name(b->kind, b->lit) << " : " << to_string(b->type)
        << "\n";
  }
  for (const auto& [from, to] : c.links()) {
    out << "link " << from.str() << " -> " << to.str() << "\n";
  }
  out << "root " << c.root_terminal().str() << "\n";
  return out.str();
}

std::string emit_dot(const Circuit& c) {
  std::ostringstream out;
  out << "digraph hof {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box];\n";

  std::map<std::string, std::vector<const Board*>> groups;
  for (const Board* b : c.live_boards()) groups[b->group].push_back(b);

  auto node_line = [](const Board* b) {
    return "  b" + std::to_string(b->id) + " [label=\"" + kind_name(b->kind, b->lit) + "#" +
           std::to_string(b->id) + "\"];\n";
  };

  for (const auto& [group, members] : groups) {
    if (group.empty()) {
      for (const Board* b : members) out << node_line(b);
      continue;
    }
    std::string cluster_id = group;
    for (char& ch : cluster_id) {
      if (ch == '/' || ch == '.') ch = '_';
    }
    out << "  subgraph cluster_" << cluster_id << " {\n";
    out << "    label=\"" << group << "\";\n";
    for (const Board* b : members) out << "  " << node_line(b);
    out << "  }\n";
  }

  for (const auto& [from, to] : c.links()) {
    out << "  b" << from.board << " -> b" << to.board << " [label=\"" << from.path.str() << " -> "
        << to.path.str() << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace hof
