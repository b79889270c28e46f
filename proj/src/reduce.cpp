#include "reduce.hpp"

#include <deque>
#include <unordered_map>

namespace dynred::reduce {

using instr::InstrumentedProgram;
using instr::InstrumentedSemantics;
using ts::State;

void sched_successors(const InstrumentedProgram& ip, const State& s, int i,
                      std::vector<ts::Step>& out) {
  if (!ip.all_external_except(s, i)) return;
  InstrumentedSemantics sem(ip);
  sem.thread_successors(s, i, out);
}

namespace {

// closure through !cut states; one representative path per target
std::vector<BlockSuccessor> closure(const InstrumentedProgram& ip, const State& s, int i,
                                    uint64_t budget, bool cut_at_exposed) {
  std::vector<BlockSuccessor> result;
  if (!ip.all_external_except(s, i)) return result;

  auto is_cut = [&](const State& t) {
    if (ip.external(i, t.pc[i])) return true;
    return cut_at_exposed && ip.exposed_loc(i, t.pc[i]);
  };

  InstrumentedSemantics sem(ip);
  struct Node {
    State state;
    int parent;
    int edge;
  };
  std::vector<Node> nodes;
  std::unordered_map<State, int, ts::StateHash> seen_internal;
  std::unordered_map<State, int, ts::StateHash> seen_target;
  std::vector<int> stack;
  std::vector<ts::Step> succ;

  auto expand = [&](int node_idx, const State& from) {
    succ.clear();
    sem.thread_successors(from, i, succ);
    for (auto& st : succ) {
      if (is_cut(st.target)) {
        auto [it, fresh] = seen_target.try_emplace(st.target, static_cast<int>(result.size()));
        if (!fresh) continue;
        BlockSuccessor b;
        b.target = std::move(st.target);
        // reconstruct the representative path
        std::vector<int> rev{st.edge};
        for (int n = node_idx; n >= 0; n = nodes[n].parent) rev.push_back(nodes[n].edge);
        b.path.assign(rev.rbegin(), rev.rend());
        result.push_back(std::move(b));
      } else {
        auto [it, fresh] = seen_internal.try_emplace(st.target, static_cast<int>(nodes.size()));
        if (!fresh) continue;
        if (seen_internal.size() > budget)
          throw ts::BudgetExceeded("internal-state budget exceeded inside a block");
        nodes.push_back({std::move(st.target), node_idx, st.edge});
        stack.push_back(static_cast<int>(nodes.size()) - 1);
      }
    }
  };

  expand(-1, s);
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    State copy = nodes[n].state; // nodes may reallocate during expand
    expand(n, copy);
  }
  return result;
}

} // namespace

std::vector<BlockSuccessor> block_successors(const InstrumentedProgram& ip, const State& s, int i,
                                             uint64_t budget) {
  return closure(ip, s, i, budget, false);
}

std::vector<BlockSuccessor> x_block_successors(const InstrumentedProgram& ip, const State& s,
                                               int i, uint64_t budget) {
  return closure(ip, s, i, budget, true);
}

ReducedResult reduced_reach(const InstrumentedProgram& ip, Relation rel, uint64_t budget) {
  ReducedResult res;
  bool x = rel == Relation::XTrans;

  std::unordered_map<State, int, ts::StateHash> index;
  State init = ip.initial();
  index.emplace(init, 0);
  res.states.push_back(std::move(init));
  std::deque<int> frontier{0};
  if (ip.is_error(res.states[0])) res.violated = true;

  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    const State src = res.states[id];
    for (int i = 0; i < ip.thread_count(); ++i) {
      // applicable iff the source is exposed for i and all others external
      bool at_entry = ip.external(i, src.pc[i]) || (x && ip.exposed_loc(i, src.pc[i]));
      if (!at_entry || !ip.all_external_except(src, i)) continue;
      auto blocks = x ? x_block_successors(ip, src, i, budget)
                      : block_successors(ip, src, i, budget);
      for (auto& b : blocks) {
        auto [it, fresh] = index.try_emplace(b.target, static_cast<int>(res.states.size()));
        if (fresh) {
          if (res.states.size() >= budget)
            throw ts::BudgetExceeded("reduced-state budget exceeded");
          if (ip.is_error(b.target)) res.violated = true;
          res.states.push_back(std::move(b.target));
          frontier.push_back(it->second);
        }
        res.metrics.max_block_len = std::max<uint64_t>(res.metrics.max_block_len, b.path.size());
        res.steps.push_back({id, i, std::move(b.path), it->second});
      }
    }
  }
  res.metrics.external_states = res.states.size();
  res.metrics.blocks = res.steps.size();
  return res;
}

} // namespace dynred::reduce
