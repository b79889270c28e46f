#pragma once

#include "analysis.hpp"
#include "explicit_ts.hpp"
#include "synthesize.hpp"

namespace dynred::instr {

// Instrumented locations replicate each original location five ways:
// external (N), pre-commit (R), post-commit (L), and the auxiliary branch
// locations R' (Rn) and L' (Ln). id = base * 5 + tag.
enum class Tag { N = 0, R = 1, L = 2, Rn = 3, Ln = 4 };

inline int iloc(int base, Tag t) { return base * 5 + static_cast<int>(t); }
inline int base_of(int il) { return il / 5; }
inline Tag tag_of(int il) { return static_cast<Tag>(il % 5); }
const char* tag_name(Tag t);

enum class Rule { R1, R2, R3, R4, R5, R6 };

struct IEdge {
  int id = -1;   // global instrumented edge id
  int src = -1, dst = -1; // iloc ids
  Rule rule = Rule::R1;
  const movers::Condition* guard = nullptr; // nullptr = true
  bool negated = false;
  const lang::Action* action = nullptr;     // nullptr = internal no-op
  int orig_edge = -1;                       // R1/R2/R5
};

// Instrumentation mutations used by the negative-sensitivity tests.
enum class Mutation { None, DropR3, DropR6, ForceTrueConditions };

struct InstrumentedThread {
  int base_locations = 0;
  std::vector<std::vector<IEdge>> out; // per iloc id
  std::vector<int> exposed;            // refined feedback set: R-tagged iloc ids, sorted
  int iloc_count() const { return base_locations * 5; }
};

enum class Phase { W, R, L, E };
const char* phase_name(Phase p);

class InstrumentedProgram {
public:
  InstrumentedProgram(const lang::Model& m, const analysis::Analysis& an,
                      const movers::MoverSynthesis& syn, Mutation mut = Mutation::None);
  InstrumentedProgram(const InstrumentedProgram&) = delete;
  InstrumentedProgram& operator=(const InstrumentedProgram&) = delete;

  const lang::Model& model() const { return model_; }
  const analysis::Analysis& analysis() const { return an_; }
  int thread_count() const { return static_cast<int>(threads_.size()); }
  const InstrumentedThread& thread(int i) const { return threads_[i]; }
  const movers::Condition& edge_condition(int orig_edge) const { return cond_[orig_edge]; }
  movers::HeuristicKind edge_heuristic(int orig_edge) const { return kind_[orig_edge]; }
  const IEdge& iedge(int id) const { return *iedges_[id]; }
  int iedge_count() const { return static_cast<int>(iedges_.size()); }

  Phase phase_of(int thread, int32_t il) const {
    if (base_of(il) == model_.thread(thread).sink) return Phase::W;
    switch (tag_of(il)) {
      case Tag::R:
      case Tag::Rn: return Phase::R;
      case Tag::L:
      case Tag::Ln: return Phase::L;
      case Tag::N: return Phase::E;
    }
    return Phase::E;
  }
  // external (N_i): error or between transactions
  bool external(int thread, int32_t il) const {
    Phase p = phase_of(thread, il);
    return p == Phase::E || p == Phase::W;
  }
  bool exposed_loc(int thread, int32_t il) const {
    const auto& ex = threads_[thread].exposed;
    return std::binary_search(ex.begin(), ex.end(), il);
  }

  std::vector<Phase> classify(const ts::State& s) const;
  bool is_error(const ts::State& s) const;
  bool all_external(const ts::State& s) const;
  bool all_external_except(const ts::State& s, int i) const;

  ts::State initial() const;
  std::string iloc_name(int thread, int32_t il) const;
  std::string iedge_label(const IEdge& e) const;

private:
  void build_thread(int ti, Mutation mut);
  void refine_lfs(int ti);

  const lang::Model& model_;
  const analysis::Analysis& an_;
  std::vector<movers::Condition> cond_;       // per original edge (post-mutation)
  std::vector<movers::HeuristicKind> kind_;
  std::vector<std::vector<movers::Condition>> loc_cond_; // c(l) per (thread, location)
  std::vector<InstrumentedThread> threads_;
  std::vector<const IEdge*> iedges_;
  lang::Action noop_; // shared Skip
};

// classify(s)[i] computed from the pc tag alone (sink bases are W under
// every tag).
std::vector<Phase> classify_phase(const InstrumentedProgram& ip, const ts::State& s);

// Thread bisimilarity ~_i lifted to states: equal data, equal remote pcs,
// and same-base tags within {L,R} or within {N,R',L'}.
bool state_bisim(const InstrumentedProgram& ip, int i, const ts::State& a, const ts::State& b);

// Tag classes used by state_bisim; exposed for the axiom checker.
inline int tag_class(Tag t) { return (t == Tag::L || t == Tag::R) ? 0 : 1; }

// Refined location feedback set of the instrumented CFG without external
// locations, exposed as R-tagged locations only (computed during
// construction; see InstrumentedThread::exposed).

class InstrumentedSemantics : public ts::Semantics {
public:
  explicit InstrumentedSemantics(const InstrumentedProgram& ip) : ip_(ip) {}
  ts::State initial() const override { return ip_.initial(); }
  void successors(const ts::State& s, std::vector<ts::Step>& out) const override;
  // successors restricted to one thread
  void thread_successors(const ts::State& s, int i, std::vector<ts::Step>& out) const;
  bool is_error(const ts::State& s) const override { return ip_.is_error(s); }
  int thread_count() const override { return ip_.thread_count(); }
  std::string step_label(int thread, int edge) const override;
  std::string thread_name(int thread) const override { return ip_.model().thread(thread).name; }

private:
  const InstrumentedProgram& ip_;
};

} // namespace dynred::instr
