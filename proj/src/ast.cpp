#include "ast.hpp"

#include <sstream>

namespace dynred::lang {

ExprPtr Expr::lit(int64_t v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::IntLit;
  e->value = v;
  return e;
}

ExprPtr Expr::null() {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::NullLit;
  return e;
}

ExprPtr Expr::addr_of(std::string var) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::AddrOfVar;
  e->name = std::move(var);
  return e;
}

ExprPtr Expr::addr_of_cell(std::string arr, ExprPtr idx) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::AddrOfCell;
  e->name = std::move(arr);
  e->lhs = std::move(idx);
  return e;
}

ExprPtr Expr::var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::VarRef;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::deref(std::string ptr) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Deref;
  e->name = std::move(ptr);
  return e;
}

ExprPtr Expr::array(std::string arr, ExprPtr idx) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::ArrayRef;
  e->name = std::move(arr);
  e->lhs = std::move(idx);
  return e;
}

ExprPtr Expr::un(ExprKind k, ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(x);
  return e;
}

ExprPtr Expr::bin(ExprKind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->value != b->value || a->name != b->name) return false;
  return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

namespace {

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: return 3;
    case ExprKind::Add:
    case ExprKind::Sub: return 4;
    default: return 5;
  }
}

const char* op_text(ExprKind k) {
  switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Eq: return "==";
    case ExprKind::Ne: return "!=";
    case ExprKind::Lt: return "<";
    case ExprKind::Le: return "<=";
    case ExprKind::Gt: return ">";
    case ExprKind::Ge: return ">=";
    case ExprKind::And: return "&&";
    case ExprKind::Or: return "||";
    default: return "?";
  }
}

void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec) {
  switch (e->kind) {
    case ExprKind::IntLit: os << e->value; return;
    case ExprKind::NullLit: os << "null"; return;
    case ExprKind::AddrOfVar: os << "&" << e->name; return;
    case ExprKind::AddrOfCell:
      os << "&" << e->name << "[";
      print_expr(os, e->lhs, 0);
      os << "]";
      return;
    case ExprKind::VarRef: os << e->name; return;
    case ExprKind::Deref: os << "*" << e->name; return;
    case ExprKind::ArrayRef:
      os << e->name << "[";
      print_expr(os, e->lhs, 0);
      os << "]";
      return;
    case ExprKind::Not:
      os << "!";
      print_expr(os, e->lhs, 5);
      return;
    default: break;
  }
  int prec = precedence(e->kind);
  bool paren = prec < parent_prec;
  if (paren) os << "(";
  print_expr(os, e->lhs, prec);
  os << " " << op_text(e->kind) << " ";
  print_expr(os, e->rhs, prec + 1);
  if (paren) os << ")";
}

} // namespace

std::string expr_to_string(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

bool addr_equal(const AddrExpr& a, const AddrExpr& b) {
  return a.kind == b.kind && a.name == b.name && expr_equal(a.index, b.index);
}

std::string addr_to_string(const AddrExpr& a) {
  switch (a.kind) {
    case AddrExpr::Kind::Var: return a.name;
    case AddrExpr::Kind::Pointer: return "*" + a.name;
    case AddrExpr::Kind::Cell: return a.name + "[" + expr_to_string(a.index) + "]";
  }
  return {};
}

Action Action::assign(AddrExpr l, ExprPtr r) {
  Action a;
  a.kind = ActionKind::Assign;
  a.lhs = std::move(l);
  a.rhs = std::move(r);
  return a;
}

Action Action::cas(AddrExpr t, ExprPtr e, ExprPtr n, std::string res) {
  Action a;
  a.kind = ActionKind::Cas;
  a.lhs = std::move(t);
  a.expected = std::move(e);
  a.desired = std::move(n);
  a.result = std::move(res);
  return a;
}

bool action_equal(const Action& a, const Action& b) {
  return a.kind == b.kind && expr_equal(a.when, b.when) && addr_equal(a.lhs, b.lhs) &&
         expr_equal(a.rhs, b.rhs) && expr_equal(a.expected, b.expected) &&
         expr_equal(a.desired, b.desired) && a.result == b.result &&
         expr_equal(a.cond, b.cond) && a.thread == b.thread;
}

std::string action_to_string(const Action& a) {
  switch (a.kind) {
    case ActionKind::Skip: return "skip";
    case ActionKind::Assign: {
      std::string t = addr_to_string(a.lhs);
      // fold `x := x + 1` back to nothing special; keep the plain form
      return t + " := " + expr_to_string(a.rhs);
    }
    case ActionKind::Cas: {
      std::string t;
      switch (a.lhs.kind) {
        case AddrExpr::Kind::Pointer: t = a.lhs.name; break;
        case AddrExpr::Kind::Var: t = "&" + a.lhs.name; break;
        case AddrExpr::Kind::Cell: t = "&" + a.lhs.name + "[" + expr_to_string(a.lhs.index) + "]"; break;
      }
      std::string s = "cas(" + t + ", " + expr_to_string(a.expected) + ", " + expr_to_string(a.desired);
      if (!a.result.empty()) s += ", " + a.result;
      return s + ")";
    }
    case ActionKind::Assert: return "assert(" + expr_to_string(a.cond) + ")";
    case ActionKind::Start: return "start " + a.thread;
    case ActionKind::Join: return "join " + a.thread;
  }
  return {};
}

bool program_equal(const Program& a, const Program& b) {
  if (a.vars.size() != b.vars.size() || a.arrays.size() != b.arrays.size() ||
      a.ptrs.size() != b.ptrs.size() || a.threads.size() != b.threads.size())
    return false;
  for (size_t i = 0; i < a.vars.size(); ++i) {
    const auto &x = a.vars[i], &y = b.vars[i];
    if (x.name != y.name || x.lo != y.lo || x.hi != y.hi || x.init != y.init) return false;
  }
  for (size_t i = 0; i < a.arrays.size(); ++i) {
    const auto &x = a.arrays[i], &y = b.arrays[i];
    if (x.name != y.name || x.length != y.length || x.lo != y.lo || x.hi != y.hi || x.init != y.init)
      return false;
  }
  for (size_t i = 0; i < a.ptrs.size(); ++i) {
    const auto &x = a.ptrs[i], &y = b.ptrs[i];
    if (x.name != y.name || x.target != y.target || x.target_index != y.target_index) return false;
  }
  for (size_t i = 0; i < a.threads.size(); ++i) {
    const auto &x = a.threads[i], &y = b.threads[i];
    if (x.name != y.name || x.edges.size() != y.edges.size()) return false;
    for (size_t j = 0; j < x.edges.size(); ++j) {
      const auto &e = x.edges[j], &f = y.edges[j];
      if (e.source != f.source || e.target != f.target || !action_equal(e.action, f.action))
        return false;
    }
  }
  return expr_equal(a.property, b.property);
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& v : p.vars)
    os << "var " << v.name << ": int[" << v.lo << ".." << v.hi << "] = " << v.init << ";\n";
  for (const auto& a : p.arrays) {
    os << "array " << a.name << "[" << a.length << "]: int[" << a.lo << ".." << a.hi << "] = {";
    for (size_t i = 0; i < a.init.size(); ++i) os << (i ? ", " : "") << a.init[i];
    os << "};\n";
  }
  for (const auto& q : p.ptrs) {
    os << "ptr " << q.name;
    if (q.target.empty())
      os << " = null";
    else if (q.target_index < 0)
      os << " = &" << q.target;
    else
      os << " = &" << q.target << "[" << q.target_index << "]";
    os << ";\n";
  }
  for (const auto& t : p.threads) {
    os << "thread " << t.name << " {\n";
    for (const auto& e : t.edges) {
      os << "  " << e.source << ": ";
      if (e.action.when) os << "when (" << expr_to_string(e.action.when) << ") ";
      os << action_to_string(e.action) << " goto " << e.target << ";\n";
    }
    os << "}\n";
  }
  if (p.property) os << "assert(" << expr_to_string(p.property) << ");\n";
  return os.str();
}

} // namespace dynred::lang
