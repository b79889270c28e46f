#include "axioms.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace dynred::axioms {

using instr::InstrumentedProgram;
using instr::Phase;
using instr::Tag;
using ts::TransitionSystem;

namespace {

// Group reachable states so that every ~_i-related pair shares a group:
// equal data, equal remote pcs, equal base of pc_i — the tag class then
// decides relatedness inside the group.
std::vector<std::vector<int>> bisim_groups(const InstrumentedProgram& ip,
                                           const TransitionSystem& ts, int i) {
  (void)ip;
  std::unordered_map<ts::State, std::vector<int>, ts::StateHash> groups;
  for (int id = 0; id < ts.state_count(); ++id) {
    ts::State key = ts.states[id];
    key.pc[i] = instr::base_of(key.pc[i]); // forget the tag
    groups[key].push_back(id);
  }
  std::vector<std::vector<int>> out;
  for (auto& [k, v] : groups)
    if (v.size() > 1) out.push_back(std::move(v));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::string state_str(const InstrumentedProgram& ip, const ts::State& s) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < ip.thread_count(); ++i) os << (i ? "," : "") << ip.iloc_name(i, s.pc[i]);
  os << " |";
  for (size_t i = 0; i < s.data.size(); ++i)
    os << " " << ip.model().layout().slot_name(static_cast<int>(i)) << "=" << s.data[i];
  os << ")";
  return os.str();
}

// successor state ids of `s` by thread `t`, with the transition labels
void thread_succs(const TransitionSystem& ts, int s, int t, std::vector<std::pair<int, int>>& out) {
  out.clear();
  for (int tix : ts.out[s]) {
    const auto& tr = ts.transitions[tix];
    if (tr.thread == t) out.emplace_back(tr.dst, tr.edge);
  }
}

} // namespace

CheckResult check_thread_bisim(const InstrumentedProgram& ip, const TransitionSystem& ts, int i) {
  CheckResult res;
  auto groups = bisim_groups(ip, ts, i);
  std::vector<std::pair<int, int>> sa, sb;
  for (const auto& g : groups) {
    for (int a : g)
      for (int b : g) {
        if (a == b) continue;
        if (!instr::state_bisim(ip, i, ts.states[a], ts.states[b])) continue;
        // every move of a must be matched by b for the same thread
        for (int k = 0; k < ip.thread_count(); ++k) {
          thread_succs(ts, a, k, sa);
          thread_succs(ts, b, k, sb);
          for (const auto& [da, ea] : sa) {
            bool matched = false;
            for (const auto& [db, eb] : sb)
              if (instr::state_bisim(ip, i, ts.states[da], ts.states[db])) {
                matched = true;
                break;
              }
            if (!matched) {
              res.ok = false;
              std::ostringstream os;
              os << "thread bisimulation broken for thread " << ip.model().thread(i).name
                 << ":\n  " << state_str(ip, ts.states[a]) << " ~ " << state_str(ip, ts.states[b])
                 << "\n  but only the former has a matching " << ip.model().thread(k).name
                 << " move to " << state_str(ip, ts.states[da]);
              res.detail = os.str();
              return res;
            }
          }
        }
      }
  }
  return res;
}

namespace {

bool bisim_ij(const InstrumentedProgram& ip, int i, int j, const ts::State& a,
              const ts::State& b) {
  // ~_{i,j}: the equivalence closure of ~_i and ~_j — coordinate-wise on
  // the two pcs, identity elsewhere.
  if (a.data != b.data) return false;
  for (int k = 0; k < ip.thread_count(); ++k) {
    if (k == i || k == j) continue;
    if (a.pc[k] != b.pc[k]) return false;
  }
  auto coord_ok = [&](int t) {
    int32_t x = a.pc[t], y = b.pc[t];
    return instr::base_of(x) == instr::base_of(y) &&
           instr::tag_class(instr::tag_of(x)) == instr::tag_class(instr::tag_of(y));
  };
  return coord_ok(i) && coord_ok(j);
}

} // namespace

PasReport check_pas(const InstrumentedProgram& ip, const TransitionSystem& ts) {
  PasReport rep;
  const int n = ip.thread_count();

  auto fail = [&](int item, const std::string& msg) {
    if (rep.items[item].ok) {
      rep.items[item].ok = false;
      rep.items[item].detail = msg;
    }
  };

  // Item 1: the phase partition is total and disjoint by construction;
  // check that classification is stable and sinks are external.
  for (int id = 0; id < ts.state_count(); ++id) {
    auto ph = ip.classify(ts.states[id]);
    for (int i = 0; i < n; ++i) {
      Tag t = instr::tag_of(ts.states[id].pc[i]);
      bool sink = instr::base_of(ts.states[id].pc[i]) == ip.model().thread(i).sink;
      Phase want = sink           ? Phase::W
                   : (t == Tag::N) ? Phase::E
                   : (t == Tag::R || t == Tag::Rn) ? Phase::R
                                                   : Phase::L;
      if (ph[i] != want) {
        fail(0, "phase classification mismatch at " + state_str(ip, ts.states[id]));
        break;
      }
    }
  }

  // Item 2: from every L_i-state an N_i-state is reachable via thread i
  // alone. Backward fixpoint over i-transitions.
  for (int i = 0; i < n; ++i) {
    std::vector<bool> good(ts.state_count(), false);
    std::vector<std::vector<int>> rev(ts.state_count());
    std::vector<int> work;
    for (size_t k = 0; k < ts.transitions.size(); ++k) {
      const auto& tr = ts.transitions[k];
      if (tr.thread != i) continue;
      rev[tr.dst].push_back(tr.src);
      if (ip.external(i, ts.states[tr.dst].pc[i]) && !good[tr.src]) {
        good[tr.src] = true;
        work.push_back(tr.src);
      }
    }
    while (!work.empty()) {
      int s = work.back();
      work.pop_back();
      for (int p : rev[s])
        if (!good[p]) {
          good[p] = true;
          work.push_back(p);
        }
    }
    for (int id = 0; id < ts.state_count(); ++id) {
      if (ip.phase_of(i, ts.states[id].pc[i]) == Phase::L && !good[id]) {
        fail(1, "post phase of " + ip.model().thread(i).name + " cannot terminate from " +
                    state_str(ip, ts.states[id]));
        break;
      }
    }
  }

  // Items 3-5 over all transitions.
  for (const auto& tr : ts.transitions) {
    const auto& a = ts.states[tr.src];
    const auto& b = ts.states[tr.dst];
    for (int j = 0; j < n; ++j) {
      if (j == tr.thread) continue;
      if (ip.phase_of(j, a.pc[j]) != ip.phase_of(j, b.pc[j]))
        fail(2, "step of " + ip.model().thread(tr.thread).name + " changed the phase of " +
                    ip.model().thread(j).name + " at " + state_str(ip, a));
    }
    if (ip.phase_of(tr.thread, a.pc[tr.thread]) == Phase::W &&
        ip.phase_of(tr.thread, b.pc[tr.thread]) != Phase::W)
      fail(3, "local transition leaves an error state at " + state_str(ip, a));
    if (ip.phase_of(tr.thread, a.pc[tr.thread]) == Phase::L &&
        ip.phase_of(tr.thread, b.pc[tr.thread]) == Phase::R)
      fail(4, "post phase reaches pre phase at " + state_str(ip, a));
  }

  // Items 6-7 over reachable bisimilar pairs.
  for (int i = 0; i < n && (rep.items[5].ok || rep.items[6].ok); ++i) {
    auto groups = bisim_groups(ip, ts, i);
    for (const auto& g : groups)
      for (int a : g)
        for (int b : g) {
          if (a >= b) continue;
          if (!instr::state_bisim(ip, i, ts.states[a], ts.states[b])) continue;
          bool wa = ip.phase_of(i, ts.states[a].pc[i]) == Phase::W;
          bool wb = ip.phase_of(i, ts.states[b].pc[i]) == Phase::W;
          if (wa != wb)
            fail(5, "bisimilar states disagree on the error phase: " +
                        state_str(ip, ts.states[a]) + " ~ " + state_str(ip, ts.states[b]));
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (ip.phase_of(j, ts.states[a].pc[j]) != ip.phase_of(j, ts.states[b].pc[j]))
              fail(6, "bisimilar states disagree on a remote phase: " +
                          state_str(ip, ts.states[a]) + " ~ " + state_str(ip, ts.states[b]));
          }
        }
  }

  // Item 8: sigma ->_i sigma' (in R_i), sigma' ->_j sigma'' closes as
  // sigma ->_j . ->_i up to ~_j, with the i-step again ending in R_i.
  std::vector<std::pair<int, int>> sj, si;
  for (const auto& tr : ts.transitions) {
    if (!rep.items[7].ok) break;
    if (ip.phase_of(tr.thread, ts.states[tr.dst].pc[tr.thread]) != Phase::R) continue;
    int i = tr.thread;
    for (int tix : ts.out[tr.dst]) {
      const auto& tj = ts.transitions[tix];
      if (tj.thread == i) continue;
      // need sigma ->_j rho ->_i target' with target' ~_j target and in R_i
      bool closed = false;
      thread_succs(ts, tr.src, tj.thread, sj);
      for (const auto& [rho, ej] : sj) {
        thread_succs(ts, rho, i, si);
        for (const auto& [fin, ei] : si) {
          if (ip.phase_of(i, ts.states[fin].pc[i]) != Phase::R) continue;
          if (instr::state_bisim(ip, tj.thread, ts.states[fin], ts.states[tj.dst])) {
            closed = true;
            break;
          }
        }
        if (closed) break;
      }
      if (!closed) {
        fail(7, "pre-commit step does not right-commute up to bisimulation:\n  " +
                    state_str(ip, ts.states[tr.src]) + " -" + ip.model().thread(i).name + "-> " +
                    state_str(ip, ts.states[tr.dst]) + " -" + ip.model().thread(tj.thread) .name +
                    "-> " + state_str(ip, ts.states[tj.dst]));
        break;
      }
    }
  }

  // Item 9: sigma ->_j sigma', sigma' ->_i sigma'' with sigma' in L_i closes
  // as sigma ->_i . ->_j up to ~_{i,j}.
  for (const auto& tj : ts.transitions) {
    if (!rep.items[8].ok) break;
    int j = tj.thread;
    for (int tix : ts.out[tj.dst]) {
      const auto& ti_ = ts.transitions[tix];
      int i = ti_.thread;
      if (i == j) continue;
      if (ip.phase_of(i, ts.states[ti_.src].pc[i]) != Phase::L) continue;
      bool closed = false;
      thread_succs(ts, tj.src, i, si);
      for (const auto& [rho, ei] : si) {
        thread_succs(ts, rho, j, sj);
        for (const auto& [fin, ej] : sj) {
          if (bisim_ij(ip, i, j, ts.states[fin], ts.states[ti_.dst])) {
            closed = true;
            break;
          }
        }
        if (closed) break;
      }
      if (!closed) {
        fail(8, "post-commit step does not left-commute up to bisimulation:\n  " +
                    state_str(ip, ts.states[tj.src]) + " -" + ip.model().thread(j).name + "-> " +
                    state_str(ip, ts.states[tj.dst]) + " -" + ip.model().thread(i).name + "-> " +
                    state_str(ip, ts.states[ti_.dst]));
        break;
      }
    }
  }

  return rep;
}

CrossReport check_cross_equivalence(const lang::Model& m, uint64_t budget, instr::Mutation mut) {
  CrossReport rep;
  ts::OriginalSemantics orig(m);
  auto ts_orig = ts::build_ts(orig, budget);
  rep.original = ts::reach_error(ts_orig).violated;
  rep.original_states = ts_orig.state_count();

  analysis::Analysis an = analysis::analyze(m);
  movers::MoverSynthesis syn = movers::synthesize_all(m, an);
  InstrumentedProgram ip(m, an, syn, mut);

  instr::InstrumentedSemantics isem(ip);
  auto ts_instr = ts::build_ts(isem, budget);
  rep.instrumented = ts::reach_error(ts_instr).violated;
  rep.instrumented_states = ts_instr.state_count();

  auto red = reduce::reduced_reach(ip, reduce::Relation::BrTrans, budget);
  rep.brtrans = red.violated;
  rep.brtrans_states = red.metrics.external_states;

  auto xred = reduce::reduced_reach(ip, reduce::Relation::XTrans, budget);
  rep.xtrans = xred.violated;
  rep.xtrans_states = xred.metrics.external_states;

  rep.ok = rep.original == rep.instrumented && rep.original == rep.brtrans &&
           rep.original == rep.xtrans;
  if (!rep.ok) {
    std::ostringstream os;
    os << "verdict mismatch: original=" << (rep.original ? "VIOLATED" : "SAFE")
       << " instrumented=" << (rep.instrumented ? "VIOLATED" : "SAFE")
       << " brtrans=" << (rep.brtrans ? "VIOLATED" : "SAFE")
       << " xtrans=" << (rep.xtrans ? "VIOLATED" : "SAFE");
    rep.detail = os.str();
  }
  return rep;
}

} // namespace dynred::axioms
