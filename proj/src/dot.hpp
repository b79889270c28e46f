#pragma once

#include "explicit_ts.hpp"
#include "instrument.hpp"

namespace dynred::ts {

// GraphViz views. Instrumented locations are colored by phase:
// external = green, pre = orange, post = red.
std::string dump_dot_ts(const TransitionSystem& ts, const Semantics& sem);
std::string dump_dot_cfg(const lang::Model& m);
std::string dump_dot_icfg(const instr::InstrumentedProgram& ip);

} // namespace dynred::ts
