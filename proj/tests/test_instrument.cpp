#include "support.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace dynred;
using namespace dynred::lang;
using namespace dynred::instr;

namespace {

std::map<Rule, int> rule_histogram(const InstrumentedThread& it) {
  std::map<Rule, int> h;
  for (const auto& vec : it.out)
    for (const auto& e : vec) ++h[e.rule];
  return h;
}

} // namespace

TEST_CASE("the two-location loop instruments to 10 locations and 14 edges") {
  // alpha: l1 -> l2, beta: l2 -> l1, feedback set {l1}; applying the rules
  // by hand gives R1:4 R2:4 R3:2 R4:2 R5:1 R6:1
  auto pl = testing::pipeline_for(
      "var x: int[0..1];\n"
      "thread T { l1: x := 1 goto l2; l2: x := 0 goto l1; }\n"
      "thread U { u: x := 1 goto end; }");
  const auto& it = pl->ip->thread(0);
  CHECK(it.iloc_count() == 10);
  auto h = rule_histogram(it);
  CHECK(h[Rule::R1] == 4);
  CHECK(h[Rule::R2] == 4);
  CHECK(h[Rule::R3] == 2);
  CHECK(h[Rule::R4] == 2);
  CHECK(h[Rule::R5] == 1);
  CHECK(h[Rule::R6] == 1);
  int total = 0;
  for (auto [r, n] : h) total += n;
  CHECK(total == 14);
}

TEST_CASE("location counts are always five per original location") {
  for (const auto& name : testing::corpus()) {
    CAPTURE(name);
    auto pl = testing::pipeline_for_benchmark(name);
    for (int t = 0; t < pl->model.thread_count(); ++t)
      CHECK(pl->ip->thread(t).iloc_count() == 5 * pl->model.thread(t).location_count());
  }
}

TEST_CASE("terminal targets commit immediately and return via R6") {
  auto pl = testing::pipeline_for("var x: int[0..1];\nthread T { l1: x := 1 goto end; }");
  const Model& m = pl->model;
  const auto& it = pl->ip->thread(0);
  int l1 = m.thread(0).loc_ids.at("l1");
  int end = m.thread(0).loc_ids.at(kEndLoc);
  // one unconditional branch from l1.N and l1.R' each, straight to end.L
  const auto& from_n = it.out[iloc(l1, Tag::N)];
  REQUIRE(from_n.size() == 1);
  CHECK(from_n[0].guard == nullptr);
  CHECK(from_n[0].dst == iloc(end, Tag::L));
  const auto& from_rn = it.out[iloc(l1, Tag::Rn)];
  REQUIRE(from_rn.size() == 1);
  CHECK(from_rn[0].dst == iloc(end, Tag::L));
  // the terminal is in the feedback set, so R6 exposes end.N
  const auto& from_l = it.out[iloc(end, Tag::L)];
  REQUIRE(from_l.size() == 1);
  CHECK(from_l[0].rule == Rule::R6);
  CHECK(from_l[0].dst == iloc(end, Tag::N));
}

TEST_CASE("the instrumented initial state is all-N") {
  for (const auto& name : {"fig3.prog", "fig6.prog"}) {
    auto pl = testing::pipeline_for_benchmark(name);
    ts::State s = pl->ip->initial();
    for (int i = 0; i < pl->ip->thread_count(); ++i) {
      CHECK(tag_of(s.pc[i]) == Tag::N);
      CHECK(base_of(s.pc[i]) == pl->model.thread(i).initial);
    }
    auto ph = pl->ip->classify(s);
    for (auto p : ph) CHECK(p == Phase::E);
  }
}

TEST_CASE("phase classification follows the tags, sinks are W under any tag") {
  auto pl = testing::pipeline_for_benchmark("fig4.prog");
  const Model& m = pl->model;
  int sink = m.thread(0).sink;
  REQUIRE(sink >= 0);
  for (Tag t : {Tag::N, Tag::R, Tag::L, Tag::Rn, Tag::Ln})
    CHECK(pl->ip->phase_of(0, iloc(sink, t)) == Phase::W);
  int a1 = m.thread(0).loc_ids.at("a1");
  CHECK(pl->ip->phase_of(0, iloc(a1, Tag::R)) == Phase::R);
  CHECK(pl->ip->phase_of(0, iloc(a1, Tag::Rn)) == Phase::R);
  CHECK(pl->ip->phase_of(0, iloc(a1, Tag::L)) == Phase::L);
  CHECK(pl->ip->phase_of(0, iloc(a1, Tag::Ln)) == Phase::L);
  CHECK(pl->ip->phase_of(0, iloc(a1, Tag::N)) == Phase::E);
}

TEST_CASE("state bisimilarity relates tag classes with equal data and remote pcs") {
  auto pl = testing::pipeline_for_benchmark("fig4.prog");
  ts::State s = pl->ip->initial();
  int base = base_of(s.pc[0]);
  ts::State a = s, b = s;
  a.pc[0] = iloc(base, Tag::R);
  b.pc[0] = iloc(base, Tag::L);
  CHECK(state_bisim(*pl->ip, 0, a, b));
  b.pc[0] = iloc(base, Tag::N);
  CHECK_FALSE(state_bisim(*pl->ip, 0, a, b)); // R and N are different classes
  a.pc[0] = iloc(base, Tag::Ln);
  CHECK(state_bisim(*pl->ip, 0, a, b)); // {N, R', L'} is one class
  b.data[0] ^= 1;
  CHECK_FALSE(state_bisim(*pl->ip, 0, a, b)); // data must agree
  b.data[0] ^= 1;
  b.pc[1] = iloc(base_of(b.pc[1]), Tag::R);
  CHECK_FALSE(state_bisim(*pl->ip, 0, a, b)); // remote pcs must be identical
}

TEST_CASE("instrumented runs follow the N R* L* N phase pattern per thread") {
  std::mt19937_64 rng(99);
  for (const auto& name : {"fig2.prog", "fig4.prog", "fig5_lookups.prog"}) {
    CAPTURE(name);
    auto pl = testing::pipeline_for_benchmark(name);
    InstrumentedSemantics sem(*pl->ip);
    std::vector<ts::Step> succ;
    for (int walk = 0; walk < 200; ++walk) {
      ts::State s = sem.initial();
      // automaton state per thread: 0 external, 1 pre, 2 post
      std::vector<int> mode(pl->ip->thread_count(), 0);
      for (int step = 0; step < 80; ++step) {
        succ.clear();
        sem.successors(s, succ);
        if (succ.empty()) break;
        auto& st = succ[rng() % succ.size()];
        int i = st.thread;
        Phase p = pl->ip->phase_of(i, st.target.pc[i]);
        switch (p) {
          case Phase::R:
            CHECK(mode[i] <= 1); // pre never follows post
            mode[i] = 1;
            break;
          case Phase::L:
            mode[i] = 2;
            break;
          case Phase::E:
          case Phase::W:
            mode[i] = 0;
            break;
        }
        s = std::move(st.target);
      }
    }
  }
}

TEST_CASE("errors are reachable in the instrumented system iff in the original") {
  for (const auto& name : testing::corpus()) {
    CAPTURE(name);
    auto pl = testing::pipeline_for_benchmark(name);
    ts::OriginalSemantics os(pl->model);
    InstrumentedSemantics is(*pl->ip);
    CHECK(ts::reach_error(ts::build_ts(os)).violated ==
          ts::reach_error(ts::build_ts(is)).violated);
  }
}

TEST_CASE("guard text and dot output of the instrumented graph") {
  auto pl = testing::pipeline_for(
      "var x: int[0..1];\n"
      "thread T { l1: x := 1 goto l2; l2: x := 0 goto l1; }\n"
      "thread U { u: x := 1 goto end; }");
  std::string dot = ts::dump_dot_icfg(*pl->ip);
  CHECK(dot.find("fillcolor=palegreen") != std::string::npos); // external
  CHECK(dot.find("fillcolor=orange") != std::string::npos);    // pre
  CHECK(dot.find("fillcolor=tomato") != std::string::npos);    // post
  CHECK(dot.find("l1.N") != std::string::npos);
  CHECK(dot.find("l1.R'") != std::string::npos);
  // 10 + 10 + 5 nodes across both threads
  size_t nodes = 0;
  for (size_t pos = 0; (pos = dot.find("style=filled", pos)) != std::string::npos; ++pos) ++nodes;
  CHECK(nodes == 25);
}
