#include "support.hpp"

#include <doctest.h>

using namespace dynred;
using namespace dynred::lang;
using namespace dynred::analysis;

namespace {

std::set<std::string> names_of(const Layout& lay, const std::set<int>& slots) {
  std::set<std::string> out;
  for (int s : slots) out.insert(lay.slot_name(s));
  return out;
}

std::set<std::string> may_names(const Model& m, const AliasMap& am, const std::string& ptr) {
  std::set<std::string> out;
  for (int32_t a : am.of(m.layout().slot_of_var(ptr)))
    out.insert(a == 0 ? "null" : m.layout().slot_name(m.layout().addr_to_slot(a)));
  return out;
}

} // namespace

TEST_CASE("may-alias collects all syntactic targets") {
  SUBCASE("the load-balancing pointers smear over both counters") {
    Model m(lower_sugar(testing::parse_benchmark("fig6.prog")));
    AliasMap am = may_alias(m);
    // union of the initializer (null) and both branch assignments
    CHECK(may_names(m, am, "p1") == std::set<std::string>{"null", "x", "y"});
    CHECK(may_names(m, am, "p2") == std::set<std::string>{"null", "x", "y"});
  }
  SUBCASE("a never-reassigned pointer keeps its initializer") {
    Model m(lower_sugar(parse_program(
        "var b: int[0..1]; ptr q = &b; thread T { a: *q := 1 goto end; }")));
    CHECK(may_names(m, may_alias(m), "q") == std::set<std::string>{"b"});
  }
  SUBCASE("an uninitialized pointer may only be null") {
    Model m(lower_sugar(parse_program(
        "var b: int[0..1]; ptr q; thread T { a: b := 1 goto end; }")));
    CHECK(may_names(m, may_alias(m), "q") == std::set<std::string>{"null"});
  }
  SUBCASE("pointer-to-pointer assignment unions the sets transitively") {
    Model m(lower_sugar(parse_program(
        "var a: int[0..1]; var b: int[0..1]; ptr p = &a; ptr q = &b; ptr r;\n"
        "thread T { l1: r := p goto l2; l2: p := q goto end; }")));
    AliasMap am = may_alias(m);
    CHECK(may_names(m, am, "p") == std::set<std::string>{"a", "b"});
    CHECK(may_names(m, am, "r") == std::set<std::string>{"null", "a", "b"});
  }
}

TEST_CASE("read/write footprints") {
  Model m(lower_sugar(parse_program(
      "var x: int[0..3]; var y: int[0..3]; var b: int[0..3]; var e: int[0..1];\n"
      "array T[3]: int[0..2]; var i: int[0..2]; var r: int[0..1];\n"
      "ptr p = &b;\n"
      "thread W { a: x := y goto end; }")));
  AliasMap am = may_alias(m);
  const Layout& lay = m.layout();

  SUBCASE("plain assignment") {
    AccessSets s = rw_sets(Action::assign(AddrExpr::var("x"), Expr::var("y")), m, am);
    CHECK(names_of(lay, s.reads) == std::set<std::string>{"y"});
    CHECK(names_of(lay, s.writes) == std::set<std::string>{"x"});
  }
  SUBCASE("pointer increment touches the pointed-to cell") {
    Action a = Action::assign(AddrExpr::pointer("p"),
                              Expr::bin(ExprKind::Add, Expr::deref("p"), Expr::lit(1)));
    AccessSets s = rw_sets(a, m, am);
    CHECK(s.reads.count(lay.slot_of_var("b")) == 1);
    CHECK(names_of(lay, s.writes) == std::set<std::string>{"b"});
  }
  SUBCASE("cas with an unknown index writes every bucket") {
    Action a = Action::cas(AddrExpr::cell("T", Expr::var("i")), Expr::var("e"), Expr::lit(1), "r");
    AccessSets s = rw_sets(a, m, am);
    CHECK(names_of(lay, s.writes) == std::set<std::string>{"T[0]", "T[1]", "T[2]", "r"});
    CHECK(s.reads.count(lay.slot_of_var("i")) == 1);
    CHECK(s.reads.count(lay.slot_of_var("e")) == 1);
    CHECK(s.reads.count(lay.slot_of_cell("T", 0)) == 1);
  }
}

TEST_CASE("conflict detection") {
  Model m(lower_sugar(parse_program(
      "var x: int[0..3]; var y: int[0..3]; var b: int[0..3]; var c: int[0..3];\n"
      "var s: int[0..3]; var t: int[0..3]; ptr p = &s; ptr q = &t;\n"
      "thread W { a: x := y goto end; }")));
  AliasMap am = may_alias(m);
  auto sets = [&](const Action& a) { return rw_sets(a, m, am); };

  CHECK(conflicting(sets(Action::assign(AddrExpr::var("x"), Expr::lit(0))),
                    sets(Action::assign(AddrExpr::var("x"), Expr::var("y")))));
  // dereferences through disjoint singleton may-sets never meet
  Action incp = Action::assign(AddrExpr::pointer("p"),
                               Expr::bin(ExprKind::Add, Expr::deref("p"), Expr::lit(1)));
  Action wq = Action::assign(AddrExpr::pointer("q"), Expr::lit(1));
  CHECK_FALSE(conflicting(sets(incp), sets(wq)));
  CHECK_FALSE(conflicting(sets(Action::assign(AddrExpr::var("b"), Expr::lit(2))),
                          sets(Action::assign(AddrExpr::var("c"), Expr::lit(3)))));
}

TEST_CASE("conflict soundness: non-conflicting remote pairs commute in the oracle") {
  for (const auto& name : {"fig1.prog", "fig3.prog", "fig4.prog", "dynlock.prog"}) {
    CAPTURE(name);
    Model m(lower_sugar(testing::parse_benchmark(name)));
    Analysis an = analyze(m);
    ts::OriginalSemantics sem(m);
    auto ts = ts::build_ts(sem);
    auto step_to = [&](int state, int edge) {
      for (int tix : ts.out[state])
        if (ts.transitions[tix].edge == edge) return ts.transitions[tix].dst;
      return -1;
    };
    for (size_t e = 0; e < m.edges().size(); ++e)
      for (size_t f = e + 1; f < m.edges().size(); ++f) {
        if (m.edge(static_cast<int>(e)).thread == m.edge(static_cast<int>(f)).thread ||
            an.conflict[e][f])
          continue;
        // both-commutation diagram over every reachable state
        for (int s = 0; s < ts.state_count(); ++s) {
          int s1 = step_to(s, static_cast<int>(e));
          if (s1 < 0) continue;
          int s12 = step_to(s1, static_cast<int>(f));
          if (s12 < 0) continue;
          int s2 = step_to(s, static_cast<int>(f));
          REQUIRE(s2 >= 0);
          REQUIRE(step_to(s2, static_cast<int>(e)) == s12);
        }
      }
  }
}

TEST_CASE("alias soundness: every observed pointer value is inside its may-set") {
  for (const auto& name : testing::corpus()) {
    CAPTURE(name);
    Model m(lower_sugar(testing::parse_benchmark(name)));
    Analysis an = analyze(m);
    ts::OriginalSemantics sem(m);
    auto ts = ts::build_ts(sem);
    for (int slot = 0; slot < m.layout().slot_count(); ++slot) {
      if (m.layout().slot(slot).kind != SlotKind::PointerSlot) continue;
      for (const auto& st : ts.states) CHECK(an.alias.contains(slot, st.data[slot]));
    }
  }
}

TEST_CASE("location reachability closure") {
  Model m(lower_sugar(parse_program(
      "var x: int[0..2];\n"
      "thread A { l1: x := 1 goto l2; l2: x := 2 goto l3; l3: skip goto end; }\n"
      "thread B { m1: x := 1 goto m2; m2: skip goto m1; }")));
  auto ra = reach_closure(m, 0);
  const auto& ta = m.thread(0);
  CHECK(ra[ta.loc_ids.at("l1")][ta.loc_ids.at("l3")]);
  CHECK_FALSE(ra[ta.loc_ids.at("l3")][ta.loc_ids.at("l1")]);
  CHECK(ra[ta.loc_ids.at("l2")][ta.loc_ids.at("l2")]); // reflexive
  auto rb = reach_closure(m, 1);
  const auto& tb = m.thread(1);
  for (const char* a : {"m1", "m2"})
    for (const char* b : {"m1", "m2"}) CHECK(rb[tb.loc_ids.at(a)][tb.loc_ids.at(b)]);
}

TEST_CASE("feedback sets hit every cycle") {
  SUBCASE("two-location loop") {
    Model m(lower_sugar(parse_program(
        "var x: int[0..1];\nthread T { l1: x := 1 goto l2; l2: x := 0 goto l1; }")));
    auto lfs = compute_lfs(m, 0);
    CHECK(lfs == std::set<int>{m.thread(0).loc_ids.at("l1")});
    CHECK(acyclic_without(m, 0, lfs));
  }
  SUBCASE("straight line: just the terminal") {
    Model m(lower_sugar(parse_program("var x: int[0..1];\nthread T { a: x := 1 goto end; }")));
    auto lfs = compute_lfs(m, 0);
    CHECK(lfs == std::set<int>{m.thread(0).loc_ids.at(kEndLoc)});
  }
  SUBCASE("nested loops sharing a header need only the header") {
    Model m(lower_sugar(parse_program(
        "var x: int[0..3];\n"
        "thread T { h: x := 1 goto a; h: x := 2 goto b; a: skip goto h; b: skip goto h; }")));
    auto lfs = compute_lfs(m, 0);
    CHECK(acyclic_without(m, 0, lfs));
    // brute-force oracle: first subset size whose removal breaks all cycles
    int n = m.thread(0).location_count();
    size_t best = static_cast<size_t>(n) + 1;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::set<int> sub;
      for (int l = 0; l < n; ++l)
        if (mask & (1 << l)) sub.insert(l);
      if (acyclic_without(m, 0, sub)) best = std::min(best, sub.size());
    }
    CHECK(best == 1);
    CHECK(lfs == std::set<int>{m.thread(0).loc_ids.at("h")});
  }
  SUBCASE("every corpus feedback set validates") {
    for (const auto& name : testing::corpus()) {
      CAPTURE(name);
      Model m(lower_sugar(testing::parse_benchmark(name)));
      for (int t = 0; t < m.thread_count(); ++t) CHECK(acyclic_without(m, t, compute_lfs(m, t)));
    }
  }
}

TEST_CASE("refined feedback sets expose pre-commit locations only") {
  SUBCASE("straight-line threads need no exposure") {
    auto pl = testing::pipeline_for("var x: int[0..1];\nthread T { a: x := 1 goto end; }");
    CHECK(pl->ip->thread(0).exposed.empty());
  }
  SUBCASE("a loop exposes exactly one R location") {
    auto pl = testing::pipeline_for(
        "var x: int[0..1];\nthread T { l1: x := 1 goto l2; l2: x := 0 goto l1; }\n"
        "thread U { u: x := 1 goto end; }");
    const auto& exposed = pl->ip->thread(0).exposed;
    REQUIRE(exposed.size() == 1);
    CHECK(instr::tag_of(exposed[0]) == instr::Tag::R);
  }
  SUBCASE("corpus exposure is always R-tagged") {
    for (const auto& name : testing::corpus()) {
      CAPTURE(name);
      auto pl = testing::pipeline_for_benchmark(name);
      for (int t = 0; t < pl->model.thread_count(); ++t)
        for (int il : pl->ip->thread(t).exposed) CHECK(instr::tag_of(il) == instr::Tag::R);
    }
  }
}
