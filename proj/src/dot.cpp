#include "dot.hpp"

#include <sstream>

namespace dynred::ts {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string state_label(const TransitionSystem& ts, int id) {
  std::ostringstream os;
  os << "s" << id;
  const State& s = ts.states[id];
  os << " pc=(";
  for (size_t i = 0; i < s.pc.size(); ++i) os << (i ? "," : "") << s.pc[i];
  os << ")";
  return os.str();
}

} // namespace

std::string dump_dot_ts(const TransitionSystem& ts, const Semantics& sem) {
  std::ostringstream os;
  os << "digraph ts {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
  for (int i = 0; i < ts.state_count(); ++i) {
    os << "  s" << i << " [label=" << quote(state_label(ts, i));
    if (ts.error_flag[i]) os << ", color=red, style=filled, fillcolor=mistyrose";
    if (i == ts.initial) os << ", penwidth=2";
    os << "];\n";
  }
  for (const auto& t : ts.transitions)
    os << "  s" << t.src << " -> s" << t.dst
       << " [label=" << quote(sem.thread_name(t.thread) + ": " + sem.step_label(t.thread, t.edge))
       << "];\n";
  os << "}\n";
  return os.str();
}

std::string dump_dot_cfg(const lang::Model& m) {
  std::ostringstream os;
  os << "digraph cfg {\n  node [shape=circle, fontsize=10];\n";
  for (int ti = 0; ti < m.thread_count(); ++ti) {
    const auto& t = m.thread(ti);
    os << "  subgraph cluster_" << ti << " {\n    label=" << quote(t.name) << ";\n";
    for (int l = 0; l < t.location_count(); ++l) {
      os << "    t" << ti << "_" << l << " [label=" << quote(t.loc_names[l]);
      if (l == t.sink) os << ", color=red";
      if (l == t.initial) os << ", penwidth=2";
      os << "];\n";
    }
    os << "  }\n";
  }
  for (const auto& e : m.edges()) {
    std::string label = lang::action_to_string(*e.action);
    if (e.action->when) label = "when (" + lang::expr_to_string(e.action->when) + ") " + label;
    os << "  t" << e.thread << "_" << e.src << " -> t" << e.thread << "_" << e.dst
       << " [label=" << quote(label) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string dump_dot_icfg(const instr::InstrumentedProgram& ip) {
  using instr::Tag;
  std::ostringstream os;
  os << "digraph icfg {\n  node [shape=circle, fontsize=10];\n";
  const auto& m = ip.model();
  for (int ti = 0; ti < ip.thread_count(); ++ti) {
    const auto& it = ip.thread(ti);
    os << "  subgraph cluster_" << ti << " {\n    label=" << quote(m.thread(ti).name) << ";\n";
    for (int il = 0; il < it.iloc_count(); ++il) {
      const char* fill = "palegreen"; // external
      switch (instr::tag_of(il)) {
        case Tag::R:
        case Tag::Rn: fill = "orange"; break;
        case Tag::L:
        case Tag::Ln: fill = "tomato"; break;
        case Tag::N: fill = "palegreen"; break;
      }
      os << "    i" << ti << "_" << il << " [label=" << quote(ip.iloc_name(ti, il))
         << ", style=filled, fillcolor=" << fill << "];\n";
    }
    os << "  }\n";
  }
  for (int ti = 0; ti < ip.thread_count(); ++ti) {
    const auto& it = ip.thread(ti);
    for (const auto& vec : it.out)
      for (const auto& e : vec) {
        std::string label = ip.iedge_label(e);
        if (e.guard) {
          label += e.negated ? " !(" : " (";
          label += movers::condition_to_string(*e.guard, m) + ")";
        }
        os << "  i" << ti << "_" << e.src << " -> i" << ti << "_" << e.dst
           << " [label=" << quote(label) << "];\n";
      }
  }
  os << "}\n";
  return os.str();
}

} // namespace dynred::ts
