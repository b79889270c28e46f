#include "explicit_ts.hpp"

#include "eval.hpp"

#include <algorithm>
#include <deque>

namespace dynred::ts {

using lang::Outcome;

State OriginalSemantics::initial() const {
  State s;
  s.pc.resize(model_.thread_count());
  for (int i = 0; i < model_.thread_count(); ++i) s.pc[i] = model_.thread(i).initial;
  s.data = model_.layout().initial_valuation();
  return s;
}

void OriginalSemantics::successors(const State& s, std::vector<Step>& out) const {
  lang::Valuation next;
  for (int i = 0; i < model_.thread_count(); ++i) {
    const auto& ti = model_.thread(i);
    for (int eid : ti.out_edges[s.pc[i]]) {
      const auto& e = model_.edge(eid);
      switch (lang::apply_action(*e.action, model_.layout(), s.data, next)) {
        case Outcome::Blocked: break;
        case Outcome::Ok: {
          State t = s;
          t.pc[i] = e.dst;
          t.data = next;
          out.push_back({i, eid, std::move(t)});
          break;
        }
        case Outcome::Fault: {
          State t = s;
          t.pc[i] = ti.sink; // lower_sugar materializes the sink for faulting threads
          out.push_back({i, eid, std::move(t)});
          break;
        }
      }
    }
  }
}

bool OriginalSemantics::is_error(const State& s) const {
  for (int i = 0; i < model_.thread_count(); ++i)
    if (model_.thread(i).sink >= 0 && s.pc[i] == model_.thread(i).sink) return true;
  return false;
}

std::string OriginalSemantics::step_label(int, int edge) const { return model_.edge_label(edge); }

TransitionSystem build_ts(const Semantics& sem, uint64_t budget, ExploreOrder order) {
  TransitionSystem ts;
  State init = sem.initial();
  ts.index.emplace(init, 0);
  ts.states.push_back(std::move(init));
  std::deque<int> frontier{0};
  std::vector<Step> succ;
  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    succ.clear();
    sem.successors(ts.states[id], succ);
    if (order == ExploreOrder::ReversedSuccessors) std::reverse(succ.begin(), succ.end());
    for (auto& st : succ) {
      auto [it, inserted] = ts.index.try_emplace(st.target, ts.state_count());
      if (inserted) {
        if (ts.states.size() >= budget)
          throw BudgetExceeded("state budget of " + std::to_string(budget) + " exceeded");
        ts.states.push_back(std::move(st.target));
        frontier.push_back(it->second);
      }
      ts.transitions.push_back({id, st.thread, st.edge, it->second});
    }
  }
  ts.out.resize(ts.states.size());
  for (size_t i = 0; i < ts.transitions.size(); ++i)
    ts.out[ts.transitions[i].src].push_back(static_cast<int>(i));
  ts.error_flag.resize(ts.states.size());
  for (int i = 0; i < ts.state_count(); ++i) {
    ts.error_flag[i] = sem.is_error(ts.states[i]);
    if (ts.error_flag[i]) ts.error_ids.push_back(i);
  }
  return ts;
}

Verdict reach_error(const TransitionSystem& ts) {
  Verdict v;
  if (ts.error_ids.empty()) return v;
  // BFS from the initial state for a shortest witness.
  std::vector<int> parent(ts.state_count(), -1), via(ts.state_count(), -1);
  std::deque<int> q{ts.initial};
  std::vector<bool> seen(ts.state_count(), false);
  seen[ts.initial] = true;
  int hit = ts.error_flag[ts.initial] ? ts.initial : -1;
  while (hit < 0 && !q.empty()) {
    int id = q.front();
    q.pop_front();
    for (int tix : ts.out[id]) {
      const Transition& t = ts.transitions[tix];
      if (seen[t.dst]) continue;
      seen[t.dst] = true;
      parent[t.dst] = id;
      via[t.dst] = tix;
      if (ts.error_flag[t.dst]) {
        hit = t.dst;
        break;
      }
      q.push_back(t.dst);
    }
  }
  if (hit < 0) return v; // unreachable error ids cannot occur in a complete TS
  v.violated = true;
  std::vector<int> rev;
  for (int s = hit; s != -1; s = parent[s]) rev.push_back(s);
  std::reverse(rev.begin(), rev.end());
  v.trace.state_ids = rev;
  for (size_t i = 1; i < rev.size(); ++i) {
    const Transition& t = ts.transitions[via[rev[i]]];
    v.trace.steps.emplace_back(t.thread, t.edge);
  }
  return v;
}

} // namespace dynred::ts
