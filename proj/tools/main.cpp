// dynred command line: parse | analyze | instrument | check | encode |
// bench | stats. Exit codes: 0 safe/ok, 1 violated, 2 usage or parse error,
// 3 budget exceeded, 4 internal invariant failure.

#include <dynred/dynred.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int status_to_exit(dynred_status s) { return static_cast<int>(s); }

bool read_file(const std::string& path, std::string& out, std::string& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err = "cannot open '" + path + "'";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

struct Handle {
  dynred_program* p = nullptr;
  ~Handle() { dynred_program_free(p); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { dynred_string_free(s); }
};

int load(const std::string& file, Handle& h) {
  std::string text, err;
  if (!read_file(file, text, err)) {
    std::cerr << "error: " << err << "\n";
    return 2;
  }
  OwnedString diag;
  dynred_status st = dynred_program_parse(text.c_str(), &h.p, &diag.s);
  if (st != DYNRED_OK) {
    std::cerr << "error: " << (diag.s ? diag.s : "parse failed") << "\n";
    return status_to_exit(st);
  }
  return 0;
}

int emit(dynred_status st, const OwnedString& out) {
  if (out.s) {
    if (st == DYNRED_OK || st == DYNRED_VIOLATED)
      std::cout << out.s;
    else
      std::cerr << out.s << "\n";
  }
  return status_to_exit(st);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynred: explicit-state and block-reduced checking of small concurrent programs"};
  app.require_subcommand(1);

  uint64_t budget = DYNRED_DEFAULT_BUDGET;
  app.add_option("--budget", budget, "global state budget (default 1000000, or DYNRED_BUDGET)");

  std::string file, out_file, dump = "text", mode = "full";
  bool movers = false, with_axioms = false;
  int bound = 1;
  uint64_t seed = 1;
  int count = 200;

  auto* cmd_parse = app.add_subcommand("parse", "validate and pretty-print a program");
  cmd_parse->add_option("file", file)->required();

  auto* cmd_analyze = app.add_subcommand("analyze", "aliasing, conflicts, and feedback sets");
  cmd_analyze->add_option("file", file)->required();
  cmd_analyze->add_flag("--movers", movers, "print the synthesized dynamic conditions");

  auto* cmd_instr = app.add_subcommand("instrument", "dump the instrumented CFG");
  cmd_instr->add_option("file", file)->required();
  cmd_instr->add_option("--dump", dump, "dot|text")->check(CLI::IsMember({"dot", "text"}));

  auto* cmd_check = app.add_subcommand("check", "error reachability");
  cmd_check->add_option("file", file)->required();
  cmd_check->add_option("--mode", mode, "full|instrumented|reduced|xreduced|cross")
      ->check(CLI::IsMember({"full", "instrumented", "reduced", "xreduced", "cross"}));
  cmd_check->add_flag("--axioms", with_axioms, "also check the transaction-system axioms");

  auto* cmd_encode = app.add_subcommand("encode", "emit the SMT-LIB2 block encoding");
  cmd_encode->add_option("file", file)->required();
  cmd_encode->add_option("--bound", bound, "unrolling depth")->required();
  cmd_encode->add_option("--out", out_file, "output file (default: stdout)");

  auto* cmd_bench = app.add_subcommand("bench", "randomized cross-equivalence campaign");
  cmd_bench->add_option("--seed", seed, "base seed");
  cmd_bench->add_option("--count", count, "number of programs");

  auto* cmd_stats = app.add_subcommand("stats", "reduction metrics");
  cmd_stats->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmd_bench->parsed()) {
    OwnedString rep;
    dynred_status st = dynred_bench(seed, count, budget, &rep.s);
    if (rep.s) std::cout << rep.s;
    return status_to_exit(st);
  }

  Handle h;
  if (int rc = load(file, h)) return rc;

  if (cmd_parse->parsed()) {
    OwnedString out;
    return emit(dynred_program_print(h.p, &out.s), out);
  }
  if (cmd_analyze->parsed()) {
    OwnedString out;
    return emit(dynred_analyze(h.p, movers ? 1 : 0, &out.s), out);
  }
  if (cmd_instr->parsed()) {
    OwnedString out;
    return emit(
        dynred_instrument_dump(h.p, dump == "dot" ? DYNRED_DUMP_DOT : DYNRED_DUMP_TEXT, &out.s),
        out);
  }
  if (cmd_check->parsed()) {
    dynred_check_mode m = DYNRED_CHECK_FULL;
    if (mode == "instrumented") m = DYNRED_CHECK_INSTRUMENTED;
    if (mode == "reduced") m = DYNRED_CHECK_REDUCED;
    if (mode == "xreduced") m = DYNRED_CHECK_XREDUCED;
    if (mode == "cross") m = DYNRED_CHECK_CROSS;
    OwnedString out;
    dynred_status st = dynred_check(h.p, m, with_axioms ? 1 : 0, budget, &out.s);
    if (out.s) {
      if (st == DYNRED_OK || st == DYNRED_VIOLATED)
        std::cout << out.s;
      else
        std::cerr << out.s << "\n";
    }
    return status_to_exit(st);
  }
  if (cmd_encode->parsed()) {
    OwnedString out;
    dynred_status st = dynred_encode(h.p, bound, &out.s);
    if (st != DYNRED_OK) {
      if (out.s) std::cerr << out.s << "\n";
      return status_to_exit(st);
    }
    if (out_file.empty()) {
      std::cout << out.s;
    } else {
      std::ofstream of(out_file, std::ios::binary);
      if (!of) {
        std::cerr << "error: cannot write '" << out_file << "'\n";
        return 2;
      }
      of << out.s;
    }
    return 0;
  }
  if (cmd_stats->parsed()) {
    OwnedString out;
    return emit(dynred_stats(h.p, budget, &out.s), out);
  }
  return 2;
}
