#pragma once

#include "condition.hpp"

namespace dynred::movers {

struct MoverReport {
  bool ok = true;
  std::string detail; // first violating diagram, human-readable
};

// Exhaustive check of the dynamic both-moving conditions on the original
// transition system: the condition is never disabled by the edge's own
// action nor by any remote step, and the condition-restricted action
// commutes with every condition-restricted remote step.
MoverReport verify_both_mover(const Condition& c, int edge_id, const lang::Model& m,
                              const ts::TransitionSystem& ts);

} // namespace dynred::movers
