#include "eval.hpp"

#include <stdexcept>

namespace dynred::lang {

std::optional<int64_t> eval_expr(const ExprPtr& e, const Layout& lay, const Valuation& d) {
  switch (e->kind) {
    case ExprKind::IntLit: return e->value;
    case ExprKind::NullLit: return 0;
    case ExprKind::AddrOfVar: {
      int s = lay.slot_of_var(e->name);
      return lay.slot(s).addr_id;
    }
    case ExprKind::AddrOfCell: {
      auto idx = eval_expr(e->lhs, lay, d);
      if (!idx) return std::nullopt;
      int s = lay.slot_of_cell(e->name, *idx);
      if (s < 0) return std::nullopt;
      return lay.slot(s).addr_id;
    }
    case ExprKind::VarRef: return d[lay.slot_of_var(e->name)];
    case ExprKind::Deref: {
      int32_t a = d[lay.slot_of_var(e->name)];
      if (a <= 0 || a > lay.addressable_count()) return std::nullopt;
      return d[lay.addr_to_slot(a)];
    }
    case ExprKind::ArrayRef: {
      auto idx = eval_expr(e->lhs, lay, d);
      if (!idx) return std::nullopt;
      int s = lay.slot_of_cell(e->name, *idx);
      if (s < 0) return std::nullopt;
      return d[s];
    }
    case ExprKind::Not: {
      auto v = eval_expr(e->lhs, lay, d);
      if (!v) return std::nullopt;
      return *v == 0 ? 1 : 0;
    }
    case ExprKind::And: {
      auto l = eval_expr(e->lhs, lay, d);
      if (!l) return std::nullopt;
      if (*l == 0) return 0; // short-circuit, the right side is not evaluated
      auto r = eval_expr(e->rhs, lay, d);
      if (!r) return std::nullopt;
      return *r != 0 ? 1 : 0;
    }
    case ExprKind::Or: {
      auto l = eval_expr(e->lhs, lay, d);
      if (!l) return std::nullopt;
      if (*l != 0) return 1;
      auto r = eval_expr(e->rhs, lay, d);
      if (!r) return std::nullopt;
      return *r != 0 ? 1 : 0;
    }
    default: break;
  }
  auto l = eval_expr(e->lhs, lay, d);
  auto r = eval_expr(e->rhs, lay, d);
  if (!l || !r) return std::nullopt;
  switch (e->kind) {
    case ExprKind::Add: return *l + *r;
    case ExprKind::Sub: return *l - *r;
    case ExprKind::Eq: return *l == *r ? 1 : 0;
    case ExprKind::Ne: return *l != *r ? 1 : 0;
    case ExprKind::Lt: return *l < *r ? 1 : 0;
    case ExprKind::Le: return *l <= *r ? 1 : 0;
    case ExprKind::Gt: return *l > *r ? 1 : 0;
    case ExprKind::Ge: return *l >= *r ? 1 : 0;
    default: throw std::logic_error("eval_expr: bad expression kind");
  }
}

std::optional<int> eval_addr(const AddrExpr& a, const Layout& lay, const Valuation& d) {
  switch (a.kind) {
    case AddrExpr::Kind::Var: return lay.slot_of_var(a.name);
    case AddrExpr::Kind::Cell: {
      auto idx = eval_expr(a.index, lay, d);
      if (!idx) return std::nullopt;
      int s = lay.slot_of_cell(a.name, *idx);
      if (s < 0) return std::nullopt;
      return s;
    }
    case AddrExpr::Kind::Pointer: {
      int32_t v = d[lay.slot_of_var(a.name)];
      if (v <= 0 || v > lay.addressable_count()) return std::nullopt;
      return lay.addr_to_slot(v);
    }
  }
  return std::nullopt;
}

namespace {

int32_t store_value(const Layout& lay, int slot, int64_t v) {
  if (lay.slot(slot).kind == SlotKind::PointerSlot) return static_cast<int32_t>(v);
  return lay.wrap(slot, v);
}

} // namespace

Outcome apply_action(const Action& a, const Layout& lay, const Valuation& in, Valuation& out) {
  if (a.when) {
    auto g = eval_expr(a.when, lay, in);
    if (!g) return Outcome::Fault;
    if (*g == 0) return Outcome::Blocked;
  }
  switch (a.kind) {
    case ActionKind::Skip:
      out = in;
      return Outcome::Ok;
    case ActionKind::Assign: {
      auto slot = eval_addr(a.lhs, lay, in);
      auto v = eval_expr(a.rhs, lay, in);
      if (!slot || !v) return Outcome::Fault;
      out = in;
      out[*slot] = store_value(lay, *slot, *v);
      return Outcome::Ok;
    }
    case ActionKind::Cas: {
      auto slot = eval_addr(a.lhs, lay, in);
      auto e = eval_expr(a.expected, lay, in);
      auto n = eval_expr(a.desired, lay, in);
      if (!slot || !e || !n) return Outcome::Fault;
      out = in;
      bool hit = in[*slot] == *e;
      if (hit) out[*slot] = store_value(lay, *slot, *n);
      if (!a.result.empty()) {
        int rs = lay.slot_of_var(a.result);
        out[rs] = lay.wrap(rs, hit ? 1 : 0);
      }
      return Outcome::Ok;
    }
    default:
      throw std::logic_error("apply_action: sugar action reached the semantics (missing lower_sugar)");
  }
}

} // namespace dynred::lang
