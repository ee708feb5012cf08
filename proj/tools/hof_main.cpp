#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hof/circuit.hpp"
#include "hof/generator.hpp"
#include "hof/netlist.hpp"
#include "hof/parser.hpp"
#include "hof/rewrite.hpp"
#include "hof/typecheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitIo = 2;
constexpr int kExitFuel = 3;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << data;
  return bool(out);
}

// Parses and links a program file; throws ParseError / TypeError.
hof::TermPtr load_main(const std::string& path) {
  std::string src;
  if (!read_file(path, src)) throw std::ios_base::failure("cannot read " + path);
  hof::Program prog = hof::parse_program(src);
  return hof::link_program(prog);
}

int cmd_check(const std::string& file) {
  try {
    hof::TermPtr main_term = load_main(file);
    hof::Ty ty = hof::typecheck(main_term);
    std::cout << hof::to_string(ty) << "\n";
    return kExitOk;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
}

struct EvalOptions {
  std::string engine = "symbolic";
  std::uint64_t fuel = 1'000'000;
  std::string trace_path;
};

int cmd_eval(const std::string& file, const EvalOptions& opt) {
  try {
    hof::TermPtr main_term = load_main(file);
    hof::Ty ty = hof::typecheck(main_term);
    if (!ty.is_nat()) {
      std::cerr << "error: main has type " << hof::to_string(ty) << ", expected N\n";
      return kExitSemantic;
    }
    std::uint64_t result;
    std::string trace_text;
    if (opt.engine == "symbolic") {
      hof::Trace trace = hof::normalize(main_term, opt.fuel, !opt.trace_path.empty());
      result = trace.final->nat;
      if (!opt.trace_path.empty()) trace_text = hof::format_trace(trace);
    } else {
      hof::Circuit c = hof::Circuit::instantiate(main_term);
      c.elaborate(opt.fuel);
      result = c.run();
      if (!opt.trace_path.empty()) {
        std::ostringstream ss;
        for (const hof::Event& e : c.event_log()) ss << hof::format_event(e) << "\n";
        trace_text = ss.str();
      }
    }
    if (!opt.trace_path.empty() && !write_file(opt.trace_path, trace_text)) {
      std::cerr << "error: cannot write " << opt.trace_path << "\n";
      return kExitIo;
    }
    std::cout << result << "\n";
    return kExitOk;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hof::FuelExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFuel;
  } catch (const hof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
}

int cmd_netlist(const std::string& file, const std::string& out_path, const std::string& format,
                std::uint64_t fuel) {
  try {
    hof::TermPtr main_term = load_main(file);
    hof::typecheck(main_term);
    hof::Circuit c = hof::Circuit::instantiate(main_term);
    c.elaborate(fuel);
    std::string text = format == "dot" ? hof::emit_dot(c) : hof::emit_netlist(c);
    if (!write_file(out_path, text)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitIo;
    }
    return kExitOk;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hof::FuelExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFuel;
  } catch (const hof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
}

int cmd_diff(const std::string& file, std::uint64_t fuel) {
  try {
    hof::TermPtr main_term = load_main(file);
    hof::Ty ty = hof::typecheck(main_term);
    if (!ty.is_nat()) {
      std::cerr << "error: main has type " << hof::to_string(ty) << ", expected N\n";
      return kExitSemantic;
    }
    hof::Trace trace = hof::normalize(main_term, fuel, false);
    std::uint64_t symbolic = trace.final->nat;
    hof::Circuit c = hof::Circuit::instantiate(main_term);
    c.elaborate(fuel);
    std::uint64_t circuit = c.run();
    std::cout << "symbolic=" << symbolic << " circuit=" << circuit << "\n";
    return symbolic == circuit ? kExitOk : kExitSemantic;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hof::FuelExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFuel;
  } catch (const hof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
}

int cmd_fuzz(std::uint64_t count, std::uint64_t seed, int max_depth, std::uint64_t max_count) {
  hof::GenConfig cfg;
  cfg.seed = seed;
  cfg.max_depth = max_depth;
  cfg.max_count = max_count;
  hof::ProgramGenerator gen(cfg);
  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    hof::TermPtr term = gen.next();
    try {
      hof::Trace trace = hof::normalize(term, 1'000'000, false);
      std::uint64_t symbolic = trace.final->nat;
      hof::Circuit c = hof::Circuit::instantiate(term);
      c.elaborate();
      std::uint64_t circuit = c.run();
      if (symbolic != circuit) {
        ++failures;
        std::cout << "counterexample " << i << ": " << hof::print_canonical(term) << "\n";
        std::cout << "  symbolic=" << symbolic << " circuit=" << circuit << "\n";
      }
    } catch (const hof::Error& e) {
      ++failures;
      std::cout << "counterexample " << i << ": " << hof::print_canonical(term) << "\n";
      std::cout << "  error: " << e.what() << "\n";
    }
  }
  if (failures == 0) {
    std::cout << "ok: " << count << " programs agree\n";
    return kExitOk;
  }
  std::cout << failures << " of " << count << " programs disagree\n";
  return kExitSemantic;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hof: a higher-order combinator language with a term-rewriting evaluator, "
               "a plug/socket circuit machine, and a netlist exporter"};
  app.require_subcommand(1);

  std::string file, out_path, format = "text", trace_path;
  EvalOptions eval_opt;
  std::uint64_t fuel = 1'000'000;
  std::uint64_t count = 0, seed = 0, max_count = 8;
  int max_depth = 6;

  CLI::App* check = app.add_subcommand("check", "typecheck a program and print the type of main");
  check->add_option("file", file, "program file")->required();

  CLI::App* eval = app.add_subcommand("eval", "evaluate main (must have type N)");
  eval->add_option("file", file, "program file")->required();
  eval->add_option("--engine", eval_opt.engine, "evaluation engine")
      ->required()
      ->check(CLI::IsMember({"symbolic", "circuit"}));
  eval->add_option("--fuel", eval_opt.fuel, "step budget")->check(CLI::PositiveNumber);
  eval->add_option("--trace", eval_opt.trace_path, "write the rewrite trace or event log here");

  CLI::App* netlist = app.add_subcommand("netlist", "elaborate and export the circuit");
  netlist->add_option("file", file, "program file")->required();
  netlist->add_option("-o,--output", out_path, "output path")->required();
  netlist->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "dot"}));
  netlist->add_option("--fuel", fuel, "elaboration budget")->check(CLI::PositiveNumber);

  CLI::App* diff = app.add_subcommand("diff", "run both engines and compare results");
  diff->add_option("file", file, "program file")->required();
  diff->add_option("--fuel", fuel, "step budget")->check(CLI::PositiveNumber);

  CLI::App* fuzz = app.add_subcommand("fuzz", "generate random programs and compare engines");
  fuzz->add_option("--count", count, "number of programs")->required()->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", seed, "generator seed")->required();
  fuzz->add_option("--max-depth", max_depth, "term depth bound")->check(CLI::PositiveNumber);
  fuzz->add_option("--max-count", max_count, "recursion literal bound")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return cmd_check(file);
  if (eval->parsed()) return cmd_eval(file, eval_opt);
  if (netlist->parsed()) return cmd_netlist(file, out_path, format, fuel);
  if (diff->parsed()) return cmd_diff(file, fuel);
  if (fuzz->parsed()) return cmd_fuzz(count, seed, max_depth, max_count);
  return kExitOk;
}
