#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "hof/term.hpp"
#include "hof/type.hpp"

namespace hof {

struct GenConfig {
  std::uint64_t seed = 0;
  int max_depth = 6;
  std::uint64_t max_count = 8;
};

// Seeded generator of closed well-typed programs of type N, built top-down
// by target type. The same seed always regenerates the same sequence
// (mt19937_64 with explicit modulo draws; no library distributions).
class ProgramGenerator {
 public:
  explicit ProgramGenerator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  TermPtr next();

 private:
  using Scope = std::vector<std::pair<std::string, Ty>>;

  std::uint64_t pick(std::uint64_t n);
  bool chance(int percent);
  std::string fresh_name();

  TermPtr gen(const Ty& target, int depth, const Scope& scope);
  TermPtr gen_nat(int depth, const Scope& scope);
  TermPtr gen_arrow(const Ty& target, int depth, const Scope& scope);
  TermPtr minimal(const Ty& target, const Scope& scope);
  TermPtr count_term(int depth, const Scope& scope);
  Ty pick_small_type();

  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::uint64_t var_counter_ = 0;
};

}  // namespace hof
