#include "support.hpp"

#include "eval.hpp"

#include <doctest.h>

#include <random>

using namespace dynred;
using namespace dynred::lang;

TEST_CASE("parser handles the two-thread counterexample system") {
  Program p = testing::parse_benchmark("fig4.prog");
  REQUIRE(p.threads.size() == 2);
  CHECK(p.threads[0].edges.size() == 2);
  CHECK(p.threads[1].edges.size() == 2);
  CHECK(p.property != nullptr);
  CHECK(p.threads[0].edges[0].source == "a1");
  CHECK(p.threads[0].edges[0].action.kind == ActionKind::Assign);
}

TEST_CASE("empty thread body is a parse error") {
  CHECK_THROWS_AS(parse_program("var x: int[0..1] = 0; thread T {}"), ParseError);
}

TEST_CASE("initial value outside the declared range is rejected") {
  CHECK_THROWS_WITH_AS(parse_program("var x: int[0..3] = 5; thread T { a: skip goto end; }"),
                       doctest::Contains("outside range"), ParseError);
}

TEST_CASE("duplicate names and unknown identifiers are rejected") {
  CHECK_THROWS_AS(parse_program("var x: int[0..1]; var x: int[0..1]; thread T { a: skip goto end; }"),
                  ParseError);
  CHECK_THROWS_AS(parse_program("thread T { a: y := 1 goto end; }"), ParseError);
  CHECK_THROWS_AS(parse_program("var x: int[0..1]; thread T { a: x := 1 goto b; }"), ParseError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_program("var x: int[0..1];\nthread T {\n  a: x := goto end;\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("3:") != std::string::npos);
  }
}

TEST_CASE("pointer increment sugar lowers to an assignment") {
  Program p = parse_program("var b: int[0..3]; ptr q = &b; thread T { a: *q++ goto end; }");
  const Action& a = p.threads[0].edges[0].action;
  CHECK(a.kind == ActionKind::Assign);
  CHECK(a.lhs.kind == AddrExpr::Kind::Pointer);
  CHECK(expr_to_string(a.rhs) == "*q + 1");
}

TEST_CASE("parse/print round-trip is stable on every benchmark") {
  for (const auto& name : testing::corpus()) {
    CAPTURE(name);
    Program p = testing::parse_benchmark(name);
    Program q = parse_program(print_program(p));
    CHECK(program_equal(p, q));
    // and printing is a fixpoint
    CHECK(print_program(p) == print_program(q));
  }
}

TEST_CASE("assert lowering produces the guard pair with a sink branch") {
  Program p = parse_program(
      "var x: int[0..2]; var y: int[0..2];\n"
      "thread T { l: assert(!(x == 1 && y == 2)) goto m; m: skip goto end; }");
  Program low = lower_sugar(p);
  const auto& edges = low.threads[0].edges;
  REQUIRE(edges.size() == 3);
  CHECK(edges[0].target == "m");
  CHECK(edges[1].target == kSinkLoc);
  CHECK(edges[0].action.kind == ActionKind::Skip);
  CHECK(edges[0].action.when != nullptr);
  CHECK(low.threads[0].has_sink);
}

TEST_CASE("start/join lowering introduces flags and entry guards") {
  Program p = parse_program(
      "var x: int[0..1];\n"
      "thread main { a: start W1 goto b; b: start W2 goto c; c: join W1 goto end; }\n"
      "thread W1 { w: x := 1 goto end; }\n"
      "thread W2 { v: skip goto end; }");
  Program low = lower_sugar(p);
  // two started flags plus one done flag
  REQUIRE(low.vars.size() == 4);
  CHECK(low.vars[1].name == "started_W1");
  CHECK(low.vars[2].name == "started_W2");
  CHECK(low.vars[3].name == "done_W1");
  // W1 now enters through a guard edge, and its terminal sets the done flag
  const auto& w1 = low.threads[1];
  CHECK(w1.edges[0].source == kEntryLoc);
  CHECK(w1.edges[0].action.kind == ActionKind::Skip);
  REQUIRE(w1.edges[0].action.when != nullptr);
  CHECK(expr_to_string(w1.edges[0].action.when) == "started_W1 == 1");
  CHECK(w1.edges[0].target == "w");
  const auto& done_edge = w1.edges.back();
  CHECK(done_edge.source == kEndLoc);
  CHECK(done_edge.action.kind == ActionKind::Assign);
}

TEST_CASE("start/join of an unknown thread is an error") {
  Program p = parse_program("thread T { a: start Nope goto end; }");
  CHECK_THROWS_AS(lower_sugar(p), ParseError);
}

TEST_CASE("a sugar-free program lowers to itself") {
  Program p = testing::parse_benchmark("fig3.prog");
  Program low = lower_sugar(p);
  CHECK(program_equal(p, low));
}

TEST_CASE("action evaluation follows the data semantics") {
  Program p = parse_program(
      "var x: int[0..3] = 1; var y: int[0..3] = 0; var r: int[0..1];\n"
      "ptr data = null; ptr tmp = &y;\n"
      "thread T { a: x := 0 goto end; }");
  Model m(lower_sugar(p));
  const Layout& lay = m.layout();
  Valuation d = lay.initial_valuation();
  Valuation out;

  SUBCASE("assignment writes the evaluated value") {
    Action a = Action::assign(AddrExpr::var("x"), Expr::lit(0));
    REQUIRE(apply_action(a, lay, d, out) == Outcome::Ok);
    CHECK(out[lay.slot_of_var("x")] == 0);
    CHECK(out[lay.slot_of_var("y")] == 0);
  }
  SUBCASE("cas on a null pointer slot publishes and reports success") {
    Action a = Action::cas(AddrExpr::var("data"), Expr::null(), Expr::var("tmp"), "r");
    REQUIRE(apply_action(a, lay, d, out) == Outcome::Ok);
    CHECK(out[lay.slot_of_var("data")] == lay.slot(lay.slot_of_var("y")).addr_id);
    CHECK(out[lay.slot_of_var("r")] == 1);
    // a second attempt fails and only writes the result
    Valuation out2;
    REQUIRE(apply_action(a, lay, out, out2) == Outcome::Ok);
    CHECK(out2[lay.slot_of_var("data")] == out[lay.slot_of_var("data")]);
    CHECK(out2[lay.slot_of_var("r")] == 0);
  }
  SUBCASE("a false guard blocks") {
    Action a = Action::guard(Expr::bin(ExprKind::Eq, Expr::var("x"), Expr::lit(0)));
    CHECK(apply_action(a, lay, d, out) == Outcome::Blocked);
  }
  SUBCASE("dereferencing null faults") {
    Action a = Action::assign(AddrExpr::pointer("data"), Expr::lit(1));
    CHECK(apply_action(a, lay, d, out) == Outcome::Fault);
  }
  SUBCASE("assignment wraps modularly into the target range") {
    Action a = Action::assign(AddrExpr::var("x"), Expr::bin(ExprKind::Add, Expr::var("x"), Expr::lit(7)));
    REQUIRE(apply_action(a, lay, d, out) == Outcome::Ok);
    CHECK(out[lay.slot_of_var("x")] == 0); // 1 + 7 = 8 = 0 mod 4
  }
}

TEST_CASE("evaluation is deterministic and range-closed on random inputs") {
  Program p = parse_program(
      "var x: int[0..3] = 1; var y: int[-1..2] = 0; array A[3]: int[0..2];\n"
      "ptr q = &x;\n"
      "thread T { a: skip goto end; }");
  Model m(lower_sugar(p));
  const Layout& lay = m.layout();
  std::mt19937_64 rng(7);

  std::vector<Action> actions;
  actions.push_back(Action::assign(AddrExpr::var("x"),
                                   Expr::bin(ExprKind::Add, Expr::var("y"), Expr::var("x"))));
  actions.push_back(Action::assign(AddrExpr::cell("A", Expr::var("y")), Expr::lit(5)));
  actions.push_back(Action::assign(AddrExpr::pointer("q"), Expr::deref("q")));
  actions.push_back(Action::cas(AddrExpr::var("x"), Expr::lit(1), Expr::lit(9)));
  Action g = Action::guard(Expr::bin(ExprKind::Le, Expr::var("y"), Expr::lit(0)));
  actions.push_back(g);

  for (int trial = 0; trial < 500; ++trial) {
    Valuation d(lay.slot_count());
    for (int s = 0; s < lay.slot_count(); ++s) {
      const auto& sl = lay.slot(s);
      d[s] = static_cast<int32_t>(sl.lo + static_cast<int64_t>(rng() % (sl.hi - sl.lo + 1)));
    }
    for (const auto& a : actions) {
      Valuation o1, o2;
      Outcome r1 = apply_action(a, lay, d, o1);
      Outcome r2 = apply_action(a, lay, d, o2);
      CHECK(r1 == r2); // deterministic partial function
      if (r1 == Outcome::Ok) {
        CHECK(o1 == o2);
        for (int s = 0; s < lay.slot_count(); ++s) {
          CHECK(o1[s] >= lay.slot(s).lo);
          CHECK(o1[s] <= lay.slot(s).hi);
        }
      }
    }
  }
}
