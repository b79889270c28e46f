#pragma once

#include "reduce.hpp"

#include <array>

namespace dynred::axioms {

struct CheckResult {
  bool ok = true;
  std::string detail;
};

// The tag-class relation lifted to states is a thread bisimulation: any
// ~_i-related pair matches each thread's transitions into ~_i-related
// targets (checked over the reachable state space).
CheckResult check_thread_bisim(const instr::InstrumentedProgram& ip,
                               const ts::TransitionSystem& ts, int i);

struct PasReport {
  // item 1..9 of the transaction-system axioms, in order:
  // partition, post-termination, remote-phase preservation, error
  // preservation, no post->pre, bisim preserves errors, bisim preserves
  // remote phases, right-commute into pre up to ~_j, left-commute from post
  // up to ~_{i,j}.
  std::array<CheckResult, 9> items;
  bool all_ok() const {
    for (const auto& r : items)
      if (!r.ok) return false;
    return true;
  }
};

PasReport check_pas(const instr::InstrumentedProgram& ip, const ts::TransitionSystem& ts);

struct CrossReport {
  bool ok = false;
  bool original = false, instrumented = false, brtrans = false, xtrans = false; // violated?
  uint64_t original_states = 0, instrumented_states = 0;
  uint64_t brtrans_states = 0, xtrans_states = 0;
  std::string detail;
};

// Verdict agreement of the four engines on one program.
CrossReport check_cross_equivalence(const lang::Model& m, uint64_t budget = ts::kDefaultBudget,
                                    instr::Mutation mut = instr::Mutation::None);

} // namespace dynred::axioms
