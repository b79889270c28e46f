#include "report.hpp"

#include <iomanip>
#include <sstream>

namespace dynred::report {

std::string verdict(const ts::TransitionSystem& ts, const ts::Semantics& sem) {
  std::ostringstream os;
  auto v = ts::reach_error(ts);
  os << "verdict: " << (v.violated ? "VIOLATED" : "SAFE") << "\n";
  os << "states: " << ts.state_count() << "\n";
  os << "transitions: " << ts.transitions.size() << "\n";
  if (v.violated && !v.trace.steps.empty()) {
    os << "trace:\n";
    for (const auto& [thread, edge] : v.trace.steps)
      os << "  (" << sem.thread_name(thread) << ", " << sem.step_label(thread, edge) << ")\n";
  }
  return os.str();
}

std::string reduced(const reduce::ReducedResult& r) {
  std::ostringstream os;
  os << "verdict: " << (r.violated ? "VIOLATED" : "SAFE") << "\n";
  os << "external_states: " << r.metrics.external_states << "\n";
  os << "blocks: " << r.metrics.blocks << "\n";
  os << "max_block_len: " << r.metrics.max_block_len << "\n";
  return os.str();
}

std::string cross(const axioms::CrossReport& r) {
  std::ostringstream os;
  auto word = [](bool v) { return v ? "VIOLATED" : "SAFE"; };
  os << "verdict: " << word(r.original) << "\n";
  os << "original: " << word(r.original) << " (" << r.original_states << " states)\n";
  os << "instrumented: " << word(r.instrumented) << " (" << r.instrumented_states << " states)\n";
  os << "brtrans: " << word(r.brtrans) << " (" << r.brtrans_states << " states)\n";
  os << "xtrans: " << word(r.xtrans) << " (" << r.xtrans_states << " states)\n";
  os << "agreement: " << (r.ok ? "ok" : "MISMATCH") << "\n";
  return os.str();
}

std::string analyze(const Pipeline& p, bool movers) {
  const auto& m = p.model;
  const auto& lay = m.layout();
  std::ostringstream os;
  os << "pointers:\n";
  for (int s = 0; s < lay.slot_count(); ++s) {
    if (lay.slot(s).kind != lang::SlotKind::PointerSlot) continue;
    os << "  " << lay.slot_name(s) << ": {";
    bool first = true;
    for (int32_t a : p.an.alias.of(s)) {
      os << (first ? " " : ", ");
      first = false;
      if (a == 0)
        os << "null";
      else
        os << "&" << lay.slot_name(lay.addr_to_slot(a));
    }
    os << " }\n";
  }
  os << "threads:\n";
  for (int ti = 0; ti < m.thread_count(); ++ti) {
    os << "  " << m.thread(ti).name << ": lfs {";
    bool first = true;
    for (int l : p.an.lfs[ti]) {
      os << (first ? " " : ", ") << m.thread(ti).loc_names[l];
      first = false;
    }
    os << " }, lfs' {";
    first = true;
    for (int il : p.ip->thread(ti).exposed) {
      os << (first ? " " : ", ") << p.ip->iloc_name(ti, il);
      first = false;
    }
    os << " }\n";
  }
  os << "edges:\n";
  for (size_t e = 0; e < m.edges().size(); ++e) {
    const auto& ei = m.edge(static_cast<int>(e));
    os << "  [" << e << "] " << m.thread(ei.thread).name << " " << m.edge_label(static_cast<int>(e))
       << " goto " << m.thread(ei.thread).loc_names[ei.dst] << "\n";
    os << "      conflicts:";
    bool any = false;
    for (size_t f = 0; f < m.edges().size(); ++f)
      if (p.an.conflict[e][f]) {
        os << " [" << f << "]";
        any = true;
      }
    if (!any) os << " none";
    os << "\n";
    if (movers)
      os << "      heuristic: " << movers::heuristic_name(p.syn.kind[e])
         << ", condition: " << movers::condition_to_string(p.syn.cond[e], m) << "\n";
  }
  return os.str();
}

std::string axioms_table(const Pipeline& p, const ts::TransitionSystem& instr_ts) {
  static const char* names[9] = {
      "the 3/4-partition",       "post phases terminate",     "remote phases preserved",
      "errors preserved locally", "post never re-enters pre", "bisimulation preserves errors",
      "bisimulation preserves remote phases", "right-commutation into pre (up to bisim)",
      "left-commutation from post (up to bisim)"};
  auto rep = axioms::check_pas(*p.ip, instr_ts);
  std::ostringstream os;
  for (int i = 0; i < 9; ++i)
    os << "axiom " << (i + 1) << " (" << names[i] << "): " << (rep.items[i].ok ? "PASS" : "FAIL")
       << "\n";
  for (int i = 0; i < 9; ++i)
    if (!rep.items[i].ok) os << "counterexample for axiom " << (i + 1) << ": " << rep.items[i].detail << "\n";
  for (int i = 0; i < p.model.thread_count(); ++i) {
    auto b = axioms::check_thread_bisim(*p.ip, instr_ts, i);
    os << "thread bisimulation (" << p.model.thread(i).name << "): " << (b.ok ? "PASS" : "FAIL")
       << "\n";
    if (!b.ok) os << b.detail << "\n";
  }
  return os.str();
}

std::string stats(const Pipeline& p, uint64_t budget) {
  std::ostringstream os;
  ts::OriginalSemantics orig(p.model);
  auto ts_o = ts::build_ts(orig, budget);
  instr::InstrumentedSemantics isem(*p.ip);
  auto ts_i = ts::build_ts(isem, budget);
  os << "original_states: " << ts_o.state_count() << "\n";
  os << "full_states: " << ts_i.state_count() << "\n";
  for (auto rel : {reduce::Relation::BrTrans, reduce::Relation::XTrans}) {
    auto r = reduce::reduced_reach(*p.ip, rel, budget);
    os << "engine: " << (rel == reduce::Relation::BrTrans ? "brtrans" : "xtrans") << "\n";
    os << "external_states: " << r.metrics.external_states << "\n";
    os << "blocks: " << r.metrics.blocks << "\n";
    os << "max_block_len: " << r.metrics.max_block_len << "\n";
    os << "reduction_ratio: " << std::fixed << std::setprecision(4)
       << static_cast<double>(r.metrics.external_states) / ts_i.state_count() << "\n";
  }
  return os.str();
}

} // namespace dynred::report
