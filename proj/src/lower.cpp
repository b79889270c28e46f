#include "ast.hpp"

#include <map>
#include <set>

namespace dynred::lang {

namespace {

ExprPtr conjoin(const ExprPtr& a, const ExprPtr& b) {
  if (!a) return b;
  if (!b) return a;
  return Expr::bin(ExprKind::And, a, b);
}

bool expr_can_fault(const ExprPtr& e, const Program& p) {
  if (!e) return false;
  switch (e->kind) {
    case ExprKind::Deref: return true;
    case ExprKind::ArrayRef:
    case ExprKind::AddrOfCell: {
      if (e->lhs->kind == ExprKind::IntLit) {
        for (const auto& a : p.arrays)
          if (a.name == e->name)
            return e->lhs->value < 0 || e->lhs->value >= a.length;
        return true;
      }
      return true; // dynamic index
    }
    default:
      return expr_can_fault(e->lhs, p) || expr_can_fault(e->rhs, p);
  }
}

bool addr_can_fault(const AddrExpr& a, const Program& p) {
  switch (a.kind) {
    case AddrExpr::Kind::Pointer: return true;
    case AddrExpr::Kind::Cell: {
      if (a.index->kind == ExprKind::IntLit) {
        for (const auto& arr : p.arrays)
          if (arr.name == a.name)
            return a.index->value < 0 || a.index->value >= arr.length;
        return true;
      }
      return true;
    }
    case AddrExpr::Kind::Var: return false;
  }
  return false;
}

std::string fresh_var(std::set<std::string>& taken, std::string base) {
  while (taken.count(base)) base += "_";
  taken.insert(base);
  return base;
}

} // namespace

bool action_can_fault(const Action& a, const Program& p) {
  if (expr_can_fault(a.when, p)) return true;
  switch (a.kind) {
    case ActionKind::Assign:
      return addr_can_fault(a.lhs, p) || expr_can_fault(a.rhs, p) ||
             (a.lhs.kind == AddrExpr::Kind::Cell && expr_can_fault(a.lhs.index, p));
    case ActionKind::Cas:
      return addr_can_fault(a.lhs, p) || expr_can_fault(a.expected, p) ||
             expr_can_fault(a.desired, p);
    default:
      return false;
  }
}

Program lower_sugar(const Program& in) {
  Program p = in;

  std::set<std::string> taken;
  for (const auto& v : p.vars) taken.insert(v.name);
  for (const auto& a : p.arrays) taken.insert(a.name);
  for (const auto& q : p.ptrs) taken.insert(q.name);
  for (const auto& t : p.threads) taken.insert(t.name);

  auto thread_index = [&](const std::string& n) -> int {
    for (size_t i = 0; i < p.threads.size(); ++i)
      if (p.threads[i].name == n) return static_cast<int>(i);
    return -1;
  };

  // Flags for start/join targets.
  std::map<int, std::string> started_flag, done_flag;
  for (const auto& t : p.threads) {
    for (const auto& e : t.edges) {
      if (e.action.kind != ActionKind::Start && e.action.kind != ActionKind::Join) continue;
      int ti = thread_index(e.action.thread);
      if (ti < 0)
        throw ParseError(0, 0, (e.action.kind == ActionKind::Start ? "start" : "join") +
                                   std::string(" of unknown thread '") + e.action.thread + "'");
      auto& m = e.action.kind == ActionKind::Start ? started_flag : done_flag;
      if (!m.count(ti)) {
        const char* prefix = e.action.kind == ActionKind::Start ? "started_" : "done_";
        std::string v = fresh_var(taken, prefix + e.action.thread);
        m[ti] = v;
        p.vars.push_back({v, 0, 1, 0});
      }
    }
  }

  for (size_t ti = 0; ti < p.threads.size(); ++ti) {
    ThreadDecl& t = p.threads[ti];
    std::vector<Edge> out;
    out.reserve(t.edges.size());
    const std::string initial = t.edges.front().source;
    bool uses_end = false;

    for (Edge e : t.edges) {
      if (e.target == kEndLoc) uses_end = true;
      switch (e.action.kind) {
        case ActionKind::Start: {
          int wi = thread_index(e.action.thread);
          Action a = Action::assign(AddrExpr::var(started_flag.at(wi)), Expr::lit(1));
          a.when = e.action.when;
          out.push_back({e.source, std::move(a), e.target});
          break;
        }
        case ActionKind::Join: {
          int wi = thread_index(e.action.thread);
          Action a = Action::skip();
          a.when = conjoin(e.action.when,
                           Expr::bin(ExprKind::Eq, Expr::var(done_flag.at(wi)), Expr::lit(1)));
          out.push_back({e.source, std::move(a), e.target});
          break;
        }
        case ActionKind::Assert: {
          Action ok = Action::skip();
          ok.when = conjoin(e.action.when, e.action.cond);
          Action bad = Action::skip();
          bad.when = conjoin(e.action.when, Expr::un(ExprKind::Not, e.action.cond));
          out.push_back({e.source, std::move(ok), e.target});
          out.push_back({e.source, std::move(bad), kSinkLoc});
          t.has_sink = true;
          break;
        }
        default:
          out.push_back(std::move(e));
          break;
      }
    }

    // Entry guard for started threads: a dedicated edge in front of the old
    // initial location, so the thread's own actions keep their footprints.
    if (auto it = started_flag.find(static_cast<int>(ti)); it != started_flag.end()) {
      Action gate = Action::skip();
      gate.when = Expr::bin(ExprKind::Eq, Expr::var(it->second), Expr::lit(1));
      out.insert(out.begin(), {kEntryLoc, std::move(gate), initial});
    }

    // A joined thread reports completion from its terminal location.
    std::string terminal = uses_end ? kEndLoc : "";
    if (auto it = done_flag.find(static_cast<int>(ti)); it != done_flag.end()) {
      if (!terminal.empty()) {
        std::string done_loc = kEndLoc + std::string("!done");
        out.push_back(
            {terminal, Action::assign(AddrExpr::var(it->second), Expr::lit(1)), done_loc});
        terminal = done_loc;
      }
    }

    // Weave the global property at the thread-final location.
    if (p.property && !terminal.empty()) {
      std::string ok_loc = kEndLoc + std::string("!ok");
      Action ok = Action::skip();
      ok.when = p.property;
      Action bad = Action::skip();
      bad.when = Expr::un(ExprKind::Not, p.property);
      out.push_back({terminal, std::move(ok), ok_loc});
      out.push_back({terminal, std::move(bad), kSinkLoc});
      t.has_sink = true;
    }

    t.edges = std::move(out);
  }
  p.property = nullptr;

  // Memory faults land in the acting thread's sink.
  for (auto& t : p.threads)
    for (const auto& e : t.edges)
      if (action_can_fault(e.action, p)) t.has_sink = true;

  return p;
}

} // namespace dynred::lang
