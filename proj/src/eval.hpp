#pragma once

#include "model.hpp"

#include <optional>

namespace dynred::lang {

enum class Outcome { Ok, Blocked, Fault };

// Expression value, or nullopt on a memory fault (null dereference or
// out-of-bounds index). Booleans are 0/1. No short-circuiting: a fault in
// any evaluated subexpression faults the whole expression.
std::optional<int64_t> eval_expr(const ExprPtr& e, const Layout& lay, const Valuation& d);

// Resolve an address designator to a slot id, or nullopt on fault.
std::optional<int> eval_addr(const AddrExpr& a, const Layout& lay, const Valuation& d);

// Data semantics of one action: deterministic partial function. On Ok,
// `out` holds the successor valuation; on Blocked/Fault it is untouched
// (a fault is a pc-only transition into the thread's sink).
Outcome apply_action(const Action& a, const Layout& lay, const Valuation& in, Valuation& out);

} // namespace dynred::lang
