#include "condition.hpp"

#include "eval.hpp"

#include <algorithm>
#include <sstream>

namespace dynred::movers {

Condition Condition::pc_not_at(int thread, std::vector<int> locs) {
  Condition c;
  c.kind = Kind::PcNotAt;
  c.thread = thread;
  std::sort(locs.begin(), locs.end());
  locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
  c.locs = std::move(locs);
  return c;
}

Condition Condition::ptr_neq(int a, int b) {
  Condition c;
  c.kind = Kind::PtrNeq;
  c.ptr_a = std::min(a, b);
  c.ptr_b = std::max(a, b);
  return c;
}

Condition Condition::deref_neq(lang::AddrExpr a, int32_t v) {
  Condition c;
  c.kind = Kind::DerefNeq;
  c.addr = std::move(a);
  c.value = v;
  return c;
}

Condition Condition::var_cmp(int slot, CmpOp op, int32_t v) {
  Condition c;
  c.kind = Kind::VarCmp;
  c.var_slot = slot;
  c.op = op;
  c.value = v;
  return c;
}

Condition Condition::conj(std::vector<Condition> parts) {
  if (parts.empty()) return make_true();
  if (parts.size() == 1) return std::move(parts.front());
  Condition c;
  c.kind = Kind::And;
  c.parts = std::move(parts);
  return c;
}

bool eval_condition(const Condition& c, const ts::State& s, const lang::Model& m,
                    bool instrumented) {
  switch (c.kind) {
    case Condition::Kind::True: return true;
    case Condition::Kind::False: return false;
    case Condition::Kind::PcNotAt: {
      int32_t base = instrumented ? s.pc[c.thread] / 5 : s.pc[c.thread];
      return !std::binary_search(c.locs.begin(), c.locs.end(), base);
    }
    case Condition::Kind::PtrNeq: return s.data[c.ptr_a] != s.data[c.ptr_b];
    case Condition::Kind::DerefNeq: {
      auto slot = lang::eval_addr(c.addr, m.layout(), s.data);
      if (!slot) return false; // unresolvable address: no commuting claim
      return s.data[*slot] != c.value;
    }
    case Condition::Kind::VarCmp: {
      int32_t v = s.data[c.var_slot];
      switch (c.op) {
        case CmpOp::Eq: return v == c.value;
        case CmpOp::Ne: return v != c.value;
        case CmpOp::Lt: return v < c.value;
        case CmpOp::Le: return v <= c.value;
        case CmpOp::Gt: return v > c.value;
        case CmpOp::Ge: return v >= c.value;
      }
      return false;
    }
    case Condition::Kind::And: {
      for (const auto& p : c.parts)
        if (!eval_condition(p, s, m, instrumented)) return false;
      return true;
    }
  }
  return false;
}

namespace {

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

} // namespace

std::string condition_to_string(const Condition& c, const lang::Model& m) {
  std::ostringstream os;
  switch (c.kind) {
    case Condition::Kind::True: return "true";
    case Condition::Kind::False: return "false";
    case Condition::Kind::PcNotAt: {
      os << "pc[" << m.thread(c.thread).name << "] not in {";
      for (size_t i = 0; i < c.locs.size(); ++i)
        os << (i ? ", " : "") << m.thread(c.thread).loc_names[c.locs[i]];
      os << "}";
      return os.str();
    }
    case Condition::Kind::PtrNeq:
      return m.layout().slot_name(c.ptr_a) + " != " + m.layout().slot_name(c.ptr_b);
    case Condition::Kind::DerefNeq: {
      const auto& lay = m.layout();
      std::string lhs;
      bool ptr_slot = false;
      switch (c.addr.kind) {
        case lang::AddrExpr::Kind::Var:
          lhs = c.addr.name;
          ptr_slot = lay.is_pointer(c.addr.name);
          break;
        case lang::AddrExpr::Kind::Cell:
          lhs = c.addr.name + "[" + lang::expr_to_string(c.addr.index) + "]";
          break;
        case lang::AddrExpr::Kind::Pointer:
          lhs = "*" + c.addr.name;
          break;
      }
      if (ptr_slot && c.value == 0) return lhs + " != null";
      return lhs + " != " + std::to_string(c.value);
    }
    case Condition::Kind::VarCmp:
      return m.layout().slot_name(c.var_slot) + " " + cmp_text(c.op) + " " +
             std::to_string(c.value);
    case Condition::Kind::And: {
      for (size_t i = 0; i < c.parts.size(); ++i)
        os << (i ? " && " : "") << condition_to_string(c.parts[i], m);
      return os.str();
    }
  }
  return "?";
}

} // namespace dynred::movers
