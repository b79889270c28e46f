#include "verify_mover.hpp"

#include <sstream>

namespace dynred::movers {

using ts::TransitionSystem;

namespace {

// destination of the unique (state, edge) transition, or -1
int step_to(const TransitionSystem& ts, int state, int edge) {
  for (int tix : ts.out[state]) {
    const auto& t = ts.transitions[tix];
    if (t.edge == edge) return t.dst;
  }
  return -1;
}

std::string describe(const lang::Model& m, const TransitionSystem& ts, int state) {
  std::ostringstream os;
  const auto& s = ts.states[state];
  os << "(";
  for (size_t i = 0; i < s.pc.size(); ++i)
    os << (i ? "," : "") << m.thread(static_cast<int>(i)).loc_names[s.pc[i]];
  os << " |";
  for (size_t i = 0; i < s.data.size(); ++i)
    os << " " << m.layout().slot_name(static_cast<int>(i)) << "=" << s.data[i];
  os << ")";
  return os.str();
}

} // namespace

MoverReport verify_both_mover(const Condition& c, int edge_id, const lang::Model& m,
                              const TransitionSystem& ts) {
  MoverReport rep;
  const int self = m.edge(edge_id).thread;

  std::vector<bool> holds(ts.state_count());
  for (int i = 0; i < ts.state_count(); ++i)
    holds[i] = eval_condition(c, ts.states[i], m, false);

  auto fail = [&](const std::string& what, int s1, int s2) {
    rep.ok = false;
    std::ostringstream os;
    os << what << "\n  at " << describe(m, ts, s1) << " -> " << describe(m, ts, s2);
    rep.detail = os.str();
    return rep;
  };

  // monotonicity: neither the action itself nor remote steps disable c
  for (const auto& t : ts.transitions) {
    if (!holds[t.src] || holds[t.dst]) continue;
    if (t.edge == edge_id)
      return fail("condition disabled by its own action", t.src, t.dst);
    if (t.thread != self)
      return fail("condition disabled by a remote step (" + m.edge_label(t.edge) + ")", t.src,
                  t.dst);
  }

  // commutation of the restricted action with every restricted remote step
  for (int s0 = 0; s0 < ts.state_count(); ++s0) {
    if (!holds[s0]) continue;
    int s1 = step_to(ts, s0, edge_id);
    if (s1 >= 0 && holds[s1]) {
      // alpha then beta: must reorder to beta then alpha
      for (int tix : ts.out[s1]) {
        const auto& t = ts.transitions[tix];
        if (t.thread == self) continue;
        int r = step_to(ts, s0, t.edge);
        if (r < 0 || !holds[r] || step_to(ts, r, edge_id) != t.dst) {
          rep.ok = false;
          std::ostringstream os;
          os << "restricted diagram does not close: " << m.edge_label(edge_id) << " ; "
             << m.edge_label(t.edge) << "\n  from " << describe(m, ts, s0) << " via "
             << describe(m, ts, s1) << " to " << describe(m, ts, t.dst);
          rep.detail = os.str();
          return rep;
        }
      }
    }
    // beta then alpha: must reorder to alpha then beta
    for (int tix : ts.out[s0]) {
      const auto& t = ts.transitions[tix];
      if (t.thread == self || !holds[t.dst]) continue;
      int s2 = step_to(ts, t.dst, edge_id);
      if (s2 < 0) continue;
      int r = step_to(ts, s0, edge_id);
      if (r < 0 || !holds[r] || step_to(ts, r, t.edge) != s2) {
        rep.ok = false;
        std::ostringstream os;
        os << "restricted diagram does not close: " << m.edge_label(t.edge) << " ; "
           << m.edge_label(edge_id) << "\n  from " << describe(m, ts, s0) << " via "
           << describe(m, ts, t.dst) << " to " << describe(m, ts, s2);
        rep.detail = os.str();
        return rep;
      }
    }
  }
  return rep;
}

} // namespace dynred::movers
