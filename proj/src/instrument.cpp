#include "instrument.hpp"

#include "eval.hpp"

#include <algorithm>
#include <functional>

namespace dynred::instr {

using lang::Model;
using movers::Condition;

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::N: return "N";
    case Tag::R: return "R";
    case Tag::L: return "L";
    case Tag::Rn: return "R'";
    case Tag::Ln: return "L'";
  }
  return "?";
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::W: return "W";
    case Phase::R: return "R";
    case Phase::L: return "L";
    case Phase::E: return "E";
  }
  return "?";
}

InstrumentedProgram::InstrumentedProgram(const Model& m, const analysis::Analysis& an,
                                         const movers::MoverSynthesis& syn, Mutation mut)
    : model_(m), an_(an), cond_(syn.cond), kind_(syn.kind) {
  if (mut == Mutation::ForceTrueConditions)
    for (auto& c : cond_) c = Condition::make_true();

  // c(l): conjunction of the outgoing edges' conditions; a possibly blocking
  // guard in any outgoing action pins it to false so the post phase cannot
  // strand the thread in L' (Lipton's "statements after the commit do not
  // block").
  loc_cond_.resize(m.thread_count());
  for (int ti = 0; ti < m.thread_count(); ++ti) {
    const auto& t = m.thread(ti);
    loc_cond_[ti].resize(t.location_count());
    for (int l = 0; l < t.location_count(); ++l) {
      std::vector<Condition> parts;
      bool may_block = false;
      for (int eid : t.out_edges[l]) {
        const auto& act = *m.edge(eid).action;
        if (act.when) may_block = true;
        if (!cond_[eid].is_true()) parts.push_back(cond_[eid]);
      }
      loc_cond_[ti][l] =
          may_block ? Condition::make_false() : Condition::conj(std::move(parts));
    }
  }

  threads_.resize(m.thread_count());
  for (int ti = 0; ti < m.thread_count(); ++ti) build_thread(ti, mut);
  for (int ti = 0; ti < m.thread_count(); ++ti) refine_lfs(ti);

  for (auto& t : threads_)
    for (auto& vec : t.out)
      for (auto& e : vec) {
        e.id = static_cast<int>(iedges_.size());
        iedges_.push_back(&e);
      }
}

void InstrumentedProgram::build_thread(int ti, Mutation mut) {
  const auto& t = model_.thread(ti);
  const auto& lfs = an_.lfs[ti];
  InstrumentedThread& it = threads_[ti];
  it.base_locations = t.location_count();
  it.out.resize(it.iloc_count());

  auto add = [&](int src, Rule r, const Condition* g, bool neg, const lang::Action* a, int oe,
                 int dst) {
    it.out[src].push_back({-1, src, dst, r, g, neg, a, oe});
  };

  // R1/R2: both dynamic branches, except that an edge into a location with
  // no continuation commits immediately (single unconditional branch to L).
  for (int l = 0; l < t.location_count(); ++l) {
    if (l == t.sink) continue; // sink replicas get no outgoing edges
    for (int eid : t.out_edges[l]) {
      const auto& e = model_.edge(eid);
      const Condition* g = &cond_[eid];
      bool terminal_target = t.out_edges[e.dst].empty();
      for (Tag srct : {Tag::N, Tag::Rn}) {
        Rule r = srct == Tag::N ? Rule::R1 : Rule::R2;
        int src = iloc(l, srct);
        if (terminal_target) {
          add(src, r, nullptr, false, e.action, eid, iloc(e.dst, Tag::L));
        } else {
          add(src, r, g, false, e.action, eid, iloc(e.dst, Tag::R));
          add(src, r, g, true, e.action, eid, iloc(e.dst, Tag::L));
        }
      }
    }
    // R3: dummy step aligning the pre phase with the two-step post phase
    if (mut != Mutation::DropR3) add(iloc(l, Tag::R), Rule::R3, nullptr, false, &noop_, -1, iloc(l, Tag::Rn));
    if (lfs.count(l)) {
      // R6: feedback locations leave the post phase immediately
      if (mut != Mutation::DropR6) add(iloc(l, Tag::L), Rule::R6, nullptr, false, &noop_, -1, iloc(l, Tag::N));
    } else {
      // R4 + R5
      const Condition* cl = &loc_cond_[ti][l];
      add(iloc(l, Tag::L), Rule::R4, cl, false, &noop_, -1, iloc(l, Tag::Ln));
      add(iloc(l, Tag::L), Rule::R4, cl, true, &noop_, -1, iloc(l, Tag::N));
      for (int eid : t.out_edges[l]) {
        const auto& e = model_.edge(eid);
        add(iloc(l, Tag::Ln), Rule::R5, nullptr, false, e.action, eid, iloc(e.dst, Tag::L));
      }
    }
  }
}

// Back-edge targets of the instrumented graph without external (N) locations,
// shifted onto R-tagged locations. Cycles in that graph are pre-phase cycles
// alternating R and R' locations, so the shift always succeeds.
void InstrumentedProgram::refine_lfs(int ti) {
  InstrumentedThread& it = threads_[ti];
  int n = it.iloc_count();
  auto dropped = [&](int il) { return tag_of(il) == Tag::N; };
  std::vector<int> color(n, 0);
  std::set<int> exposed;
  std::function<void(int)> dfs = [&](int root) {
    struct Frame { int il; size_t next; };
    std::vector<Frame> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& out = it.out[f.il];
      if (f.next < out.size()) {
        int v = out[f.next++].dst;
        if (dropped(v)) continue;
        if (color[v] == 0) {
          color[v] = 1;
          stack.push_back({v, 0});
        } else if (color[v] == 1) {
          Tag tg = tag_of(v);
          if (tg == Tag::R) {
            exposed.insert(v);
          } else if (tg == Tag::Rn) {
            exposed.insert(iloc(base_of(v), Tag::R)); // nearest R predecessor on the cycle
          } else {
            throw std::logic_error("refined feedback set: cycle through a post-phase location");
          }
        }
      } else {
        color[f.il] = 2;
        stack.pop_back();
      }
    }
  };
  for (int il = 0; il < n; ++il)
    if (!dropped(il) && color[il] == 0) dfs(il);

  // removing the exposed set must break every remaining cycle
  std::vector<int> c2(n, 0);
  bool cyclic = false;
  std::function<void(int)> check = [&](int root) {
    struct Frame { int il; size_t next; };
    std::vector<Frame> stack{{root, 0}};
    c2[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& out = it.out[f.il];
      if (f.next < out.size()) {
        int v = out[f.next++].dst;
        if (dropped(v) || exposed.count(v)) continue;
        if (c2[v] == 0) {
          c2[v] = 1;
          stack.push_back({v, 0});
        } else if (c2[v] == 1) {
          cyclic = true;
        }
      } else {
        c2[f.il] = 2;
        stack.pop_back();
      }
    }
  };
  for (int il = 0; il < n && !cyclic; ++il)
    if (!dropped(il) && !exposed.count(il) && c2[il] == 0) check(il);
  if (cyclic)
    throw std::logic_error("refined feedback set does not break all pre-phase cycles");

  it.exposed.assign(exposed.begin(), exposed.end());
}

std::vector<Phase> InstrumentedProgram::classify(const ts::State& s) const {
  std::vector<Phase> out(thread_count());
  for (int i = 0; i < thread_count(); ++i) out[i] = phase_of(i, s.pc[i]);
  return out;
}

bool InstrumentedProgram::is_error(const ts::State& s) const {
  for (int i = 0; i < thread_count(); ++i)
    if (phase_of(i, s.pc[i]) == Phase::W) return true;
  return false;
}

bool InstrumentedProgram::all_external(const ts::State& s) const {
  for (int i = 0; i < thread_count(); ++i)
    if (!external(i, s.pc[i])) return false;
  return true;
}

bool InstrumentedProgram::all_external_except(const ts::State& s, int i) const {
  for (int j = 0; j < thread_count(); ++j)
    if (j != i && !external(j, s.pc[j])) return false;
  return true;
}

ts::State InstrumentedProgram::initial() const {
  ts::State s;
  s.pc.resize(thread_count());
  for (int i = 0; i < thread_count(); ++i) s.pc[i] = iloc(model_.thread(i).initial, Tag::N);
  s.data = model_.layout().initial_valuation();
  return s;
}

std::string InstrumentedProgram::iloc_name(int thread, int32_t il) const {
  return model_.thread(thread).loc_names[base_of(il)] + "." + tag_name(tag_of(il));
}

std::string InstrumentedProgram::iedge_label(const IEdge& e) const {
  std::string s;
  switch (e.rule) {
    case Rule::R1: s = "R1"; break;
    case Rule::R2: s = "R2"; break;
    case Rule::R3: s = "R3"; break;
    case Rule::R4: s = "R4"; break;
    case Rule::R5: s = "R5"; break;
    case Rule::R6: s = "R6"; break;
  }
  if (e.guard) s += std::string(" [") + (e.negated ? "!c" : "c") + "]";
  if (e.action && e.orig_edge >= 0) s += " " + lang::action_to_string(*e.action);
  return s;
}

std::vector<Phase> classify_phase(const InstrumentedProgram& ip, const ts::State& s) {
  return ip.classify(s);
}

bool state_bisim(const InstrumentedProgram& ip, int i, const ts::State& a, const ts::State& b) {
  if (a.data != b.data) return false;
  for (int j = 0; j < ip.thread_count(); ++j)
    if (j != i && a.pc[j] != b.pc[j]) return false;
  int32_t x = a.pc[i], y = b.pc[i];
  if (base_of(x) != base_of(y)) return false;
  return tag_class(tag_of(x)) == tag_class(tag_of(y));
}

void InstrumentedSemantics::thread_successors(const ts::State& s, int i,
                                              std::vector<ts::Step>& out) const {
  const auto& mt = ip_.model().thread(i);
  const auto& edges = ip_.thread(i).out[s.pc[i]];
  lang::Valuation next;
  for (const auto& e : edges) {
    if (e.guard) {
      bool g = movers::eval_condition(*e.guard, s, ip_.model(), true);
      if (e.negated) g = !g;
      if (!g) continue;
    }
    if (!e.action || e.action->kind == lang::ActionKind::Skip) {
      // internal no-ops of R3/R4/R6 still honor a when-guard (R1 terminal
      // branches carry the original action instead)
      if (e.action && e.action->when) {
        switch (lang::apply_action(*e.action, ip_.model().layout(), s.data, next)) {
          case lang::Outcome::Blocked: continue;
          case lang::Outcome::Fault: {
            ts::State t = s;
            t.pc[i] = iloc(mt.sink, Tag::L);
            out.push_back({i, e.id, std::move(t)});
            continue;
          }
          case lang::Outcome::Ok: break;
        }
      }
      ts::State t = s;
      t.pc[i] = e.dst;
      out.push_back({i, e.id, std::move(t)});
      continue;
    }
    switch (lang::apply_action(*e.action, ip_.model().layout(), s.data, next)) {
      case lang::Outcome::Blocked: break;
      case lang::Outcome::Ok: {
        ts::State t = s;
        t.pc[i] = e.dst;
        t.data = next;
        out.push_back({i, e.id, std::move(t)});
        break;
      }
      case lang::Outcome::Fault: {
        ts::State t = s;
        t.pc[i] = iloc(mt.sink, Tag::L);
        out.push_back({i, e.id, std::move(t)});
        break;
      }
    }
  }
}

void InstrumentedSemantics::successors(const ts::State& s, std::vector<ts::Step>& out) const {
  for (int i = 0; i < ip_.thread_count(); ++i) thread_successors(s, i, out);
}

std::string InstrumentedSemantics::step_label(int thread, int edge) const {
  const IEdge& e = ip_.iedge(edge);
  return ip_.iloc_name(thread, e.src) + " " + ip_.iedge_label(e) + " -> " +
         ip_.iloc_name(thread, e.dst);
}

} // namespace dynred::instr
