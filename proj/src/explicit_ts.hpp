#pragma once

#include "model.hpp"

#include <cstdint>
#include <unordered_map>

namespace dynred::ts {

// pc components are location ids in the original system and instrumented
// location ids after instrumentation; data is the shared valuation.
struct State {
  std::vector<int32_t> pc;
  lang::Valuation data;
  bool operator==(const State&) const = default;
};

struct StateHash {
  size_t operator()(const State& s) const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](int32_t v) {
      h ^= static_cast<uint32_t>(v);
      h *= 1099511628211ull;
    };
    for (int32_t v : s.pc) mix(v);
    for (int32_t v : s.data) mix(v);
    return static_cast<size_t>(h);
  }
};

struct Step {
  int thread;
  int edge; // global edge id; instrumented edge id after instrumentation
  State target;
};

// Successor semantics of a (possibly instrumented) program.
class Semantics {
public:
  virtual ~Semantics() = default;
  virtual State initial() const = 0;
  virtual void successors(const State& s, std::vector<Step>& out) const = 0;
  virtual bool is_error(const State& s) const = 0;
  virtual int thread_count() const = 0;
  virtual std::string step_label(int thread, int edge) const = 0;
  virtual std::string thread_name(int thread) const = 0;
};

class OriginalSemantics : public Semantics {
public:
  explicit OriginalSemantics(const lang::Model& m) : model_(m) {}
  State initial() const override;
  void successors(const State& s, std::vector<Step>& out) const override;
  bool is_error(const State& s) const override;
  int thread_count() const override { return model_.thread_count(); }
  std::string step_label(int thread, int edge) const override;
  std::string thread_name(int thread) const override { return model_.thread(thread).name; }

private:
  const lang::Model& model_;
};

struct Transition {
  int src;
  int thread;
  int edge;
  int dst;
};

struct TransitionSystem {
  std::vector<State> states; // dense ids in discovery order
  int initial = 0;
  std::vector<Transition> transitions;
  std::vector<std::vector<int>> out; // per state, transition indices
  std::vector<bool> error_flag;
  std::vector<int> error_ids;
  std::unordered_map<State, int, StateHash> index;

  int state_count() const { return static_cast<int>(states.size()); }
  int id_of(const State& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  }
};

class BudgetExceeded : public std::runtime_error {
public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// BFS exploration order is the documented default; ReversedSuccessors feeds
// each state's successors in reverse and exists to test order-independence.
enum class ExploreOrder { Bfs, ReversedSuccessors };

inline constexpr uint64_t kDefaultBudget = 1000000;

TransitionSystem build_ts(const Semantics& sem, uint64_t budget = kDefaultBudget,
                          ExploreOrder order = ExploreOrder::Bfs);

struct Trace {
  std::vector<int> state_ids;                // n+1 states
  std::vector<std::pair<int, int>> steps;    // n (thread, edge) labels
};

struct Verdict {
  bool violated = false;
  Trace trace; // shortest witness when violated
};

Verdict reach_error(const TransitionSystem& ts);

} // namespace dynred::ts
