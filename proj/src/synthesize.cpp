#include "synthesize.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

namespace dynred::movers {

using analysis::AccessSets;
using analysis::Analysis;
using lang::Action;
using lang::ActionKind;
using lang::AddrExpr;
using lang::ExprKind;
using lang::ExprPtr;
using lang::Model;
using lang::SlotKind;

const char* heuristic_name(HeuristicKind k) {
  switch (k) {
    case HeuristicKind::StaticMover: return "StaticMover";
    case HeuristicKind::MonotonicAtomic: return "MonotonicAtomic";
    case HeuristicKind::StaticDeref: return "StaticDeref";
    case HeuristicKind::Reachability: return "Reachability";
    case HeuristicKind::StaticNonMover: return "StaticNonMover";
  }
  return "?";
}

namespace {

std::optional<int64_t> const_eval(const ExprPtr& e, const Model& m) {
  if (!e) return std::nullopt;
  const auto& lay = m.layout();
  switch (e->kind) {
    case ExprKind::IntLit: return e->value;
    case ExprKind::NullLit: return 0;
    case ExprKind::AddrOfVar: return lay.slot(lay.slot_of_var(e->name)).addr_id;
    case ExprKind::AddrOfCell: {
      auto i = const_eval(e->lhs, m);
      if (!i) return std::nullopt;
      int s = lay.slot_of_cell(e->name, *i);
      if (s < 0) return std::nullopt;
      return lay.slot(s).addr_id;
    }
    case ExprKind::Add: {
      auto a = const_eval(e->lhs, m), b = const_eval(e->rhs, m);
      if (a && b) return *a + *b;
      return std::nullopt;
    }
    case ExprKind::Sub: {
      auto a = const_eval(e->lhs, m), b = const_eval(e->rhs, m);
      if (a && b) return *a - *b;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

// the value of `e` can be shown != c without looking at the state
bool provably_not(const ExprPtr& e, int64_t c, const Model& m, const analysis::AliasMap& am) {
  if (auto v = const_eval(e, m)) return *v != c;
  if (e->kind == ExprKind::VarRef) {
    const auto& lay = m.layout();
    int s = lay.slot_of_var(e->name);
    if (lay.slot(s).kind == SlotKind::PointerSlot) return am.of(s).count(static_cast<int32_t>(c)) == 0;
    return c < lay.slot(s).lo || c > lay.slot(s).hi;
  }
  return false;
}

// slots read while computing the target address
std::set<int> addr_input_slots(const AddrExpr& a, const Model& m) {
  std::set<int> out;
  if (a.kind == AddrExpr::Kind::Pointer) {
    out.insert(m.layout().slot_of_var(a.name));
  } else if (a.kind == AddrExpr::Kind::Cell) {
    // index reads
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
      if (!e) return;
      if (e->kind == ExprKind::VarRef) out.insert(m.layout().slot_of_var(e->name));
      if (e->kind == ExprKind::Deref) out.insert(m.layout().slot_of_var(e->name));
      walk(e->lhs);
      walk(e->rhs);
    };
    walk(a.index);
  }
  return out;
}

// write-target slots of a designator (may-set for pointers, whole array for
// dynamic indices)
std::set<int> region_of(const AddrExpr& a, const Model& m, const analysis::AliasMap& am) {
  const auto& lay = m.layout();
  std::set<int> out;
  switch (a.kind) {
    case AddrExpr::Kind::Var:
      out.insert(lay.slot_of_var(a.name));
      break;
    case AddrExpr::Kind::Cell: {
      if (a.index->kind == ExprKind::IntLit) {
        int s = lay.slot_of_cell(a.name, a.index->value);
        if (s >= 0) {
          out.insert(s);
          break;
        }
      }
      int first = lay.first_cell_slot(a.name);
      for (int64_t i = 0; i < lay.array_length(a.name); ++i) out.insert(first + static_cast<int>(i));
      break;
    }
    case AddrExpr::Kind::Pointer:
      for (int32_t v : am.of(lay.slot_of_var(a.name)))
        if (v > 0) out.insert(lay.addr_to_slot(v));
      break;
  }
  return out;
}

bool meets(const std::set<int>& a, const std::set<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

std::vector<int> conflicting_remote(int edge_id, const Model& m, const Analysis& an) {
  std::vector<int> out;
  int ti = m.edge(edge_id).thread;
  for (size_t f = 0; f < m.edges().size(); ++f)
    if (m.edge(static_cast<int>(f)).thread != ti && an.conflict[edge_id][f])
      out.push_back(static_cast<int>(f));
  return out;
}

// ---- monotonic atomic ------------------------------------------------

std::optional<Condition> try_atomic(int edge_id, const std::vector<int>& confl, const Model& m,
                                    const Analysis& an) {
  const Action& a = *m.edge(edge_id).action;
  if (a.kind != ActionKind::Cas) return std::nullopt;
  auto c = const_eval(a.expected, m);
  if (!c) return std::nullopt;
  if (!provably_not(a.desired, *c, m, an.alias)) return std::nullopt;

  std::set<int> region = region_of(a.lhs, m, an.alias);
  std::set<int> inputs = addr_input_slots(a.lhs, m);
  const AccessSets& my = an.access[edge_id];
  std::set<int> reads_outside;
  std::set_difference(my.reads.begin(), my.reads.end(), region.begin(), region.end(),
                      std::inserter(reads_outside, reads_outside.end()));
  int result_slot = a.result.empty() ? -1 : m.layout().slot_of_var(a.result);
  if (result_slot >= 0 && (region.count(result_slot) || inputs.count(result_slot)))
    return std::nullopt; // a successful write to r would disturb the condition's inputs

  for (int f : confl) {
    const AccessSets& fs = an.access[f];
    // remote writes may only touch the region, and only via a cas that
    // checks the same expected value and never stores it
    if (meets(fs.writes, reads_outside)) return std::nullopt;
    if (result_slot >= 0 && (fs.reads.count(result_slot) || fs.writes.count(result_slot)))
      return std::nullopt;
    if (meets(fs.writes, region)) {
      const Action& b = *m.edge(f).action;
      if (b.kind != ActionKind::Cas) return std::nullopt;
      auto cb = const_eval(b.expected, m);
      if (!cb || *cb != *c) return std::nullopt;
      if (!provably_not(b.desired, *c, m, an.alias)) return std::nullopt;
    }
  }
  return Condition::deref_neq(a.lhs, static_cast<int32_t>(*c));
}

// ---- static pointer dereference --------------------------------------

// names of pointers dereferenced by the action (lvalue or expression)
std::set<std::string> deref_pointers(const Action& a) {
  std::set<std::string> out;
  std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
    if (!e) return;
    if (e->kind == ExprKind::Deref) out.insert(e->name);
    walk(e->lhs);
    walk(e->rhs);
  };
  walk(a.when);
  walk(a.rhs);
  walk(a.expected);
  walk(a.desired);
  walk(a.cond);
  if (a.kind == ActionKind::Assign || a.kind == ActionKind::Cas) {
    if (a.lhs.kind == AddrExpr::Kind::Pointer) out.insert(a.lhs.name);
    if (a.lhs.kind == AddrExpr::Kind::Cell) walk(a.lhs.index);
  }
  return out;
}

// footprint with all dereference contributions removed: what the action
// touches besides going through its pointer
AccessSets residual_access(const Action& a, const Model& m, const analysis::AliasMap& am,
                           const std::set<std::string>& derefd) {
  AccessSets full = analysis::rw_sets(a, m, am);
  std::set<int> drop;
  for (const auto& p : derefd) {
    int ps = m.layout().slot_of_var(p);
    drop.insert(ps);
    for (int32_t v : am.of(ps))
      if (v > 0) drop.insert(m.layout().addr_to_slot(v));
  }
  AccessSets res;
  std::set_difference(full.reads.begin(), full.reads.end(), drop.begin(), drop.end(),
                      std::inserter(res.reads, res.reads.end()));
  std::set_difference(full.writes.begin(), full.writes.end(), drop.begin(), drop.end(),
                      std::inserter(res.writes, res.writes.end()));
  return res;
}

// (k, l) pairs: remote locations that can still reach a modification of
// pointer slot `ps`
void pc_guards_for_pointer(int self_thread, int ps, const Model& m, const Analysis& an,
                           std::map<int, std::vector<int>>& locs_by_thread) {
  for (size_t f = 0; f < m.edges().size(); ++f) {
    const auto& e = m.edge(static_cast<int>(f));
    if (e.thread == self_thread) continue;
    if (!an.access[f].writes.count(ps)) continue;
    const auto& closure = an.closure[e.thread];
    for (int l = 0; l < m.thread(e.thread).location_count(); ++l)
      if (closure[l][e.src]) locs_by_thread[e.thread].push_back(l);
  }
}

std::optional<Condition> try_deref(int edge_id, const std::vector<int>& confl, const Model& m,
                                   const Analysis& an) {
  const auto& me = m.edge(edge_id);
  std::set<std::string> mine = deref_pointers(*me.action);
  if (mine.size() != 1) return std::nullopt;
  const std::string p = *mine.begin();
  int p_slot = m.layout().slot_of_var(p);
  AccessSets my_res = residual_access(*me.action, m, an.alias, mine);

  std::vector<int> partner_slots;
  for (int f : confl) {
    const auto& fe = m.edge(f);
    std::set<std::string> theirs = deref_pointers(*fe.action);
    AccessSets f_res = residual_access(*fe.action, m, an.alias, theirs);
    // conflicts must be explained entirely by the dereferences (or by
    // writes to the pointer slots themselves, which the pc atoms cover)
    AccessSets f_res_noptr = f_res;
    f_res_noptr.writes.erase(p_slot);
    for (const auto& q : theirs) f_res_noptr.writes.erase(m.layout().slot_of_var(q));
    if (analysis::conflicting(my_res, f_res_noptr)) return std::nullopt;
    if (theirs.size() > 1) return std::nullopt;
    if (theirs.size() == 1) {
      partner_slots.push_back(m.layout().slot_of_var(*theirs.begin()));
    } else {
      // no dereference on the other side: acceptable only for pure
      // pointer-slot writers
      bool ptr_writer_only = true;
      for (int w : an.access[f].writes)
        if (m.layout().slot(w).kind != SlotKind::PointerSlot) ptr_writer_only = false;
      if (!ptr_writer_only || analysis::conflicting(my_res, f_res)) return std::nullopt;
    }
  }

  std::sort(partner_slots.begin(), partner_slots.end());
  partner_slots.erase(std::unique(partner_slots.begin(), partner_slots.end()),
                      partner_slots.end());

  std::vector<Condition> parts;
  std::map<int, std::vector<int>> pc_locs;
  for (int q_slot : partner_slots) {
    parts.push_back(Condition::ptr_neq(p_slot, q_slot));
    pc_guards_for_pointer(me.thread, q_slot, m, an, pc_locs);
  }
  // the own pointer must stay put as well once the condition holds
  pc_guards_for_pointer(me.thread, p_slot, m, an, pc_locs);
  for (auto& [k, locs] : pc_locs) parts.push_back(Condition::pc_not_at(k, std::move(locs)));
  return Condition::conj(std::move(parts));
}

// ---- reachability -----------------------------------------------------

Condition reachability_condition(const std::vector<int>& confl, const Model& m,
                                 const Analysis& an) {
  std::map<int, std::vector<int>> locs_by_thread;
  for (int f : confl) {
    const auto& fe = m.edge(f);
    const auto& closure = an.closure[fe.thread];
    for (int l = 0; l < m.thread(fe.thread).location_count(); ++l)
      if (closure[l][fe.src]) locs_by_thread[fe.thread].push_back(l);
  }
  std::vector<Condition> parts;
  for (auto& [k, locs] : locs_by_thread) parts.push_back(Condition::pc_not_at(k, std::move(locs)));
  return Condition::conj(std::move(parts));
}

} // namespace

std::pair<Condition, HeuristicKind> synthesize_condition(int edge_id, const Model& m,
                                                         const Analysis& an) {
  std::vector<int> confl = conflicting_remote(edge_id, m, an);
  if (confl.empty()) return {Condition::make_true(), HeuristicKind::StaticMover};
  if (auto c = try_atomic(edge_id, confl, m, an))
    return {std::move(*c), HeuristicKind::MonotonicAtomic};
  if (auto c = try_deref(edge_id, confl, m, an))
    return {std::move(*c), HeuristicKind::StaticDeref};
  return {reachability_condition(confl, m, an), HeuristicKind::Reachability};
}

MoverSynthesis synthesize_all(const Model& m, const Analysis& an) {
  MoverSynthesis s;
  for (size_t e = 0; e < m.edges().size(); ++e) {
    auto [c, k] = synthesize_condition(static_cast<int>(e), m, an);
    s.cond.push_back(std::move(c));
    s.kind.push_back(k);
  }
  return s;
}

} // namespace dynred::movers
