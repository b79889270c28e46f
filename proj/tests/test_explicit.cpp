#include "support.hpp"

#include <doctest.h>

using namespace dynred;
using namespace dynred::lang;

namespace {

ts::TransitionSystem build_original(const Model& m, uint64_t budget = ts::kDefaultBudget,
                                    ts::ExploreOrder order = ts::ExploreOrder::Bfs) {
  ts::OriginalSemantics sem(m);
  return ts::build_ts(sem, budget, order);
}

} // namespace

TEST_CASE("the independent pair spans the 3x3 interleaving grid") {
  Model m(lower_sugar(testing::parse_benchmark("fig3.prog")));
  auto ts = build_original(m);
  CHECK(ts.state_count() == 9);
  CHECK(ts.transitions.size() == 12);
  CHECK(ts.error_ids.empty());
  CHECK_FALSE(ts::reach_error(ts).violated);
}

TEST_CASE("the counterexample system has 14 reachable states") {
  // hand-count oracle: pc pairs (a1..end x b1..end) with the data each
  // interleaving produces; see the regression value below
  std::string raw =
      "var x: int[0..2] = 0; var y: int[0..2] = 0;\n"
      "thread T1 { a1: x := 0 goto a2; a2: y := 2 goto end; }\n"
      "thread T2 { b1: y := 1 goto b2; b2: x := y goto end; }\n";
  Model m(lower_sugar(parse_program(raw)));
  auto ts = build_original(m);
  CHECK(ts.state_count() == 14);
  // final-state data: exactly {(1,1),(0,2),(1,2),(2,2)}
  std::set<std::pair<int, int>> finals;
  int xs = m.layout().slot_of_var("x"), ys = m.layout().slot_of_var("y");
  for (const auto& s : ts.states)
    if (m.thread(0).loc_names[s.pc[0]] == kEndLoc && m.thread(1).loc_names[s.pc[1]] == kEndLoc)
      finals.insert({s.data[xs], s.data[ys]});
  CHECK(finals == std::set<std::pair<int, int>>{{1, 1}, {0, 2}, {1, 2}, {2, 2}});
}

TEST_CASE("single thread, single edge: two states, one transition") {
  Model m(lower_sugar(parse_program("var x: int[0..1]; thread T { a: x := 1 goto end; }")));
  auto ts = build_original(m);
  CHECK(ts.state_count() == 2);
  CHECK(ts.transitions.size() == 1);
}

TEST_CASE("the woven counterexample property is violated with a shortest witness") {
  Model m(lower_sugar(testing::parse_benchmark("fig4.prog")));
  auto ts = build_original(m);
  auto v = ts::reach_error(ts);
  REQUIRE(v.violated);
  // x:=0 ; y:=1 ; x:=y ; y:=2 ; failed assertion
  CHECK(v.trace.steps.size() == 5);
  CHECK(ts.error_flag[v.trace.state_ids.back()]);
}

TEST_CASE("assert(true)-style guards keep the sink unreachable") {
  Model m(lower_sugar(parse_program(
      "var x: int[0..1];\n"
      "thread T { a: x := 1 goto b; b: assert(x == 1) goto end; }")));
  auto ts = build_original(m);
  CHECK_FALSE(ts::reach_error(ts).violated);
}

TEST_CASE("the lazy-initialization benchmark is safe") {
  Model m(lower_sugar(testing::parse_benchmark("fig2.prog")));
  auto ts = build_original(m);
  CHECK_FALSE(ts::reach_error(ts).violated);
}

TEST_CASE("exploration order does not change the system") {
  for (const auto& name : {"fig1.prog", "fig2.prog", "fig4.prog"}) {
    CAPTURE(name);
    Model m(lower_sugar(testing::parse_benchmark(name)));
    auto a = build_original(m);
    auto b = build_original(m, ts::kDefaultBudget, ts::ExploreOrder::ReversedSuccessors);
    CHECK(a.state_count() == b.state_count());
    CHECK(a.transitions.size() == b.transitions.size());
    CHECK(ts::reach_error(a).violated == ts::reach_error(b).violated);
    // same set of states regardless of numbering
    std::set<std::vector<int32_t>> sa, sb;
    for (const auto& s : a.states) {
      std::vector<int32_t> key = s.pc;
      key.insert(key.end(), s.data.begin(), s.data.end());
      sa.insert(std::move(key));
    }
    for (const auto& s : b.states) {
      std::vector<int32_t> key = s.pc;
      key.insert(key.end(), s.data.begin(), s.data.end());
      sb.insert(std::move(key));
    }
    CHECK(sa == sb);
  }
}

TEST_CASE("the state budget is a hard error, not a truncation") {
  Model m(lower_sugar(testing::parse_benchmark("fig4.prog")));
  ts::OriginalSemantics sem(m);
  CHECK_THROWS_AS(ts::build_ts(sem, 5), ts::BudgetExceeded);
}

TEST_CASE("dot output shows the grid and a single-state system") {
  Model m1(lower_sugar(parse_program(
      "var x: int[0..1];\nthread T { a: when (x == 1) skip goto end; }")));
  auto ts1 = build_original(m1);
  CHECK(ts1.state_count() == 1); // the guard blocks forever
  ts::OriginalSemantics sem1(m1);
  std::string dot1 = ts::dump_dot_ts(ts1, sem1);
  CHECK(dot1.find("s0") != std::string::npos);
  CHECK(dot1.find("s0 ->") == std::string::npos);

  Model m3(lower_sugar(testing::parse_benchmark("fig3.prog")));
  auto ts3 = build_original(m3);
  ts::OriginalSemantics sem3(m3);
  std::string dot3 = ts::dump_dot_ts(ts3, sem3);
  size_t nodes = 0, edges = 0;
  for (size_t pos = 0; (pos = dot3.find("\n  s", pos)) != std::string::npos; ++pos) ++nodes;
  for (size_t pos = 0; (pos = dot3.find(" -> ", pos)) != std::string::npos; ++pos) ++edges;
  CHECK(nodes == 9 + 12); // one line per node and per transition
  CHECK(edges == 12);
}

TEST_CASE("error states are absorbing in instrumented systems") {
  for (const auto& name : {"fig4.prog", "fig6.prog"}) {
    CAPTURE(name);
    auto pl = testing::pipeline_for_benchmark(name);
    instr::InstrumentedSemantics sem(*pl->ip);
    auto ts = ts::build_ts(sem, ts::kDefaultBudget);
    for (const auto& t : ts.transitions)
      if (ts.error_flag[t.src]) CHECK(ts.error_flag[t.dst]);
  }
}
