#pragma once

#include "instrument.hpp"

namespace dynred::reduce {

enum class Relation { BrTrans, XTrans };

// One reduced step: a maximal run of thread `thread` from an exposed state
// to the next exposed state, all other threads external throughout.
struct ReducedStep {
  int source = -1; // indices into ReducedResult::states
  int thread = -1;
  std::vector<int> path; // instrumented edge ids
  int target = -1;
};

struct Metrics {
  uint64_t external_states = 0;
  uint64_t blocks = 0;
  uint64_t max_block_len = 0;
};

struct ReducedResult {
  bool violated = false;
  Metrics metrics;
  std::vector<ts::State> states; // discovery order; [0] is the initial state
  std::vector<ReducedStep> steps;
};

// Successors of s by thread i, empty unless every other thread is external.
void sched_successors(const instr::InstrumentedProgram& ip, const ts::State& s, int i,
                      std::vector<ts::Step>& out);

struct BlockSuccessor {
  ts::State target;
  std::vector<int> path;
};

// brtrans_i: depth-first closure through internal states of thread i,
// cutting at N_i states. Pre-phase cycles are memoized, dead ends dropped.
std::vector<BlockSuccessor> block_successors(const instr::InstrumentedProgram& ip,
                                             const ts::State& s, int i,
                                             uint64_t budget = ts::kDefaultBudget);

// The encoding-oriented relation: cut additionally at exposed pre-commit
// locations; from such a state only the owning thread may continue.
std::vector<BlockSuccessor> x_block_successors(const instr::InstrumentedProgram& ip,
                                               const ts::State& s, int i,
                                               uint64_t budget = ts::kDefaultBudget);

ReducedResult reduced_reach(const instr::InstrumentedProgram& ip, Relation rel,
                            uint64_t budget = ts::kDefaultBudget);

} // namespace dynred::reduce
