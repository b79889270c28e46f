#pragma once

#include "instrument.hpp"

namespace dynred::encode {

// An acyclic instrumented path between exposed locations (external, sink,
// or refined-feedback locations), with no exposed location in between.
// A fault block ends in the sink via a memory fault of its last step.
struct Block {
  int thread = -1;
  int entry = -1, exit = -1; // iloc ids
  std::vector<const instr::IEdge*> steps;
  bool fault_exit = false;
};

// The location-level cut set: all l^N, the sink replicas, and the exposed
// refined-feedback locations.
bool is_block_boundary(const instr::InstrumentedProgram& ip, int thread, int il);

// Exhaustive, deterministic enumeration (entry id, then edge order).
std::vector<Block> enumerate_blocks(const instr::InstrumentedProgram& ip, int thread);

} // namespace dynred::encode
