#pragma once

#include "analysis.hpp"
#include "condition.hpp"

namespace dynred::movers {

enum class HeuristicKind { StaticMover, MonotonicAtomic, StaticDeref, Reachability, StaticNonMover };

const char* heuristic_name(HeuristicKind k);

struct MoverSynthesis {
  std::vector<Condition> cond;       // per global edge
  std::vector<HeuristicKind> kind;
};

// Selects exactly one heuristic per edge: no conflicts -> true (static
// mover); then monotonic-atomic, static-dereference, and the always
// applicable reachability condition, in that order. Heuristics are never
// disjoined (a disjunction of monotone conditions need not be monotone).
std::pair<Condition, HeuristicKind> synthesize_condition(int edge_id, const lang::Model& m,
                                                         const analysis::Analysis& an);

MoverSynthesis synthesize_all(const lang::Model& m, const analysis::Analysis& an);

} // namespace dynred::movers
