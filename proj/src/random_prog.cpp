#include "random_prog.hpp"

#include <random>

namespace dynred::bench {

using namespace lang;

Program random_program(uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
  };

  Program p;
  int nvars = pick(2, 3);
  for (int v = 0; v < nvars; ++v) {
    int64_t hi = pick(1, 3);
    p.vars.push_back({"v" + std::to_string(v), 0, hi, 0});
  }
  auto var_of = [&](int i) { return p.vars[i % p.vars.size()].name; };

  auto rand_expr = [&]() -> ExprPtr {
    switch (pick(0, 3)) {
      case 0: return Expr::lit(pick(0, 3));
      case 1: return Expr::var(var_of(pick(0, nvars - 1)));
      case 2:
        return Expr::bin(ExprKind::Add, Expr::var(var_of(pick(0, nvars - 1))),
                         Expr::lit(pick(1, 2)));
      default:
        return Expr::bin(ExprKind::Sub, Expr::var(var_of(pick(0, nvars - 1))), Expr::lit(1));
    }
  };
  auto rand_bexpr = [&]() -> ExprPtr {
    ExprKind op = pick(0, 1) ? ExprKind::Eq : ExprKind::Le;
    return Expr::bin(op, Expr::var(var_of(pick(0, nvars - 1))), Expr::lit(pick(0, 2)));
  };

  int nthreads = pick(2, 3);
  int max_locs = nthreads == 3 ? 3 : 4;
  for (int t = 0; t < nthreads; ++t) {
    ThreadDecl td;
    td.name = "W" + std::to_string(t);
    int nlocs = pick(2, max_locs);
    auto loc = [&](int i) { return "l" + std::to_string(i); };
    for (int l = 0; l < nlocs; ++l) {
      int fanout = pick(1, 2);
      for (int f = 0; f < fanout; ++f) {
        Edge e;
        e.source = loc(l);
        // mostly forward, sometimes a loop back
        int roll = pick(0, 9);
        if (roll < 2 && l > 0) {
          e.target = loc(pick(0, l - 1));
        } else if (l + 1 < nlocs && roll < 8) {
          e.target = loc(l + 1);
        } else {
          e.target = kEndLoc;
        }
        switch (pick(0, 5)) {
          case 0:
          case 1:
          case 2:
            e.action = Action::assign(AddrExpr::var(var_of(pick(0, nvars - 1))), rand_expr());
            break;
          case 3: {
            e.action = Action::skip();
            e.action.when = rand_bexpr();
            break;
          }
          case 4:
            e.action = Action::cas(AddrExpr::var(var_of(pick(0, nvars - 1))),
                                   Expr::lit(pick(0, 1)), Expr::lit(pick(0, 2)));
            break;
          default: {
            e.action = Action::assign(AddrExpr::var(var_of(pick(0, nvars - 1))), rand_expr());
            e.action.when = rand_bexpr();
            break;
          }
        }
        td.edges.push_back(std::move(e));
      }
    }
    p.threads.push_back(std::move(td));
  }

  if (pick(0, 9) < 6) {
    // global property, woven at thread-final locations
    p.property = Expr::un(ExprKind::Not,
                          Expr::bin(ExprKind::And, rand_bexpr(),
                                    Expr::bin(ExprKind::Ge, Expr::var(var_of(pick(0, nvars - 1))),
                                              Expr::lit(pick(0, 2)))));
  }
  return p;
}

} // namespace dynred::bench
