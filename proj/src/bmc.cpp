#include "bmc.hpp"

#include "condition.hpp"
#include "eval.hpp"

#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace dynred::encode {

using instr::InstrumentedProgram;
using instr::Tag;
using lang::ActionKind;
using lang::AddrExpr;
using lang::ExprKind;
using lang::ExprPtr;

namespace {

TermPtr mk(Term t) { return std::make_shared<Term>(std::move(t)); }

bool is_const(const TermPtr& t, int64_t* v = nullptr) {
  if (t->k == Term::K::IntConst || t->k == Term::K::BoolConst) {
    if (v) *v = t->value;
    return true;
  }
  return false;
}

} // namespace

TermPtr t_int(int64_t v) { return mk({Term::K::IntConst, v, 0, {}}); }
TermPtr t_bool(bool b) { return mk({Term::K::BoolConst, b ? 1 : 0, 0, {}}); }
TermPtr t_pc(int thread) { return mk({Term::K::PcPre, 0, thread, {}}); }
TermPtr t_data(int slot) { return mk({Term::K::DataPre, 0, slot, {}}); }

TermPtr t_ite(TermPtr c, TermPtr a, TermPtr b) {
  int64_t v;
  if (is_const(c, &v)) return v ? a : b;
  return mk({Term::K::Ite, 0, 0, {std::move(c), std::move(a), std::move(b)}});
}

TermPtr t_add(TermPtr a, TermPtr b) {
  int64_t x, y;
  if (is_const(a, &x) && is_const(b, &y)) return t_int(x + y);
  return mk({Term::K::Add, 0, 0, {std::move(a), std::move(b)}});
}

TermPtr t_sub(TermPtr a, TermPtr b) {
  int64_t x, y;
  if (is_const(a, &x) && is_const(b, &y)) return t_int(x - y);
  return mk({Term::K::Sub, 0, 0, {std::move(a), std::move(b)}});
}

TermPtr t_mod(TermPtr a, int64_t m) {
  int64_t x;
  if (is_const(a, &x)) {
    int64_t r = x % m;
    if (r < 0) r += m;
    return t_int(r);
  }
  return mk({Term::K::Mod, m, 0, {std::move(a)}});
}

TermPtr t_eq(TermPtr a, TermPtr b) {
  int64_t x, y;
  if (is_const(a, &x) && is_const(b, &y)) return t_bool(x == y);
  return mk({Term::K::Eq, 0, 0, {std::move(a), std::move(b)}});
}

TermPtr t_lt(TermPtr a, TermPtr b) {
  int64_t x, y;
  if (is_const(a, &x) && is_const(b, &y)) return t_bool(x < y);
  return mk({Term::K::Lt, 0, 0, {std::move(a), std::move(b)}});
}

TermPtr t_le(TermPtr a, TermPtr b) {
  int64_t x, y;
  if (is_const(a, &x) && is_const(b, &y)) return t_bool(x <= y);
  return mk({Term::K::Le, 0, 0, {std::move(a), std::move(b)}});
}

TermPtr t_and(std::vector<TermPtr> xs) {
  std::vector<TermPtr> keep;
  for (auto& x : xs) {
    int64_t v;
    if (is_const(x, &v)) {
      if (!v) return t_bool(false);
    } else {
      keep.push_back(std::move(x));
    }
  }
  if (keep.empty()) return t_bool(true);
  if (keep.size() == 1) return keep.front();
  return mk({Term::K::And, 0, 0, std::move(keep)});
}

TermPtr t_or(std::vector<TermPtr> xs) {
  std::vector<TermPtr> keep;
  for (auto& x : xs) {
    int64_t v;
    if (is_const(x, &v)) {
      if (v) return t_bool(true);
    } else {
      keep.push_back(std::move(x));
    }
  }
  if (keep.empty()) return t_bool(false);
  if (keep.size() == 1) return keep.front();
  return mk({Term::K::Or, 0, 0, std::move(keep)});
}

TermPtr t_not(TermPtr a) {
  int64_t v;
  if (is_const(a, &v)) return t_bool(!v);
  if (a->k == Term::K::Not) return a->args[0];
  return mk({Term::K::Not, 0, 0, {std::move(a)}});
}

int64_t eval_term(const TermPtr& t, const GroundState& g) {
  switch (t->k) {
    case Term::K::IntConst:
    case Term::K::BoolConst: return t->value;
    case Term::K::PcPre: return (*g.pc)[t->index];
    case Term::K::DataPre: return (*g.data)[t->index];
    case Term::K::Ite:
      return eval_term(t->args[0], g) ? eval_term(t->args[1], g) : eval_term(t->args[2], g);
    case Term::K::Add: return eval_term(t->args[0], g) + eval_term(t->args[1], g);
    case Term::K::Sub: return eval_term(t->args[0], g) - eval_term(t->args[1], g);
    case Term::K::Mod: {
      int64_t r = eval_term(t->args[0], g) % t->value;
      if (r < 0) r += t->value;
      return r;
    }
    case Term::K::Eq: return eval_term(t->args[0], g) == eval_term(t->args[1], g);
    case Term::K::Lt: return eval_term(t->args[0], g) < eval_term(t->args[1], g);
    case Term::K::Le: return eval_term(t->args[0], g) <= eval_term(t->args[1], g);
    case Term::K::And:
      for (const auto& a : t->args)
        if (!eval_term(a, g)) return 0;
      return 1;
    case Term::K::Or:
      for (const auto& a : t->args)
        if (eval_term(a, g)) return 1;
      return 0;
    case Term::K::Not: return !eval_term(t->args[0], g);
  }
  return 0;
}

// ---- symbolic compilation of one block ---------------------------------

namespace {

struct SymEnv {
  const InstrumentedProgram& ip;
  std::map<int, TermPtr> data; // slot -> current term; missing = DataPre

  TermPtr get(int slot) const {
    auto it = data.find(slot);
    return it == data.end() ? t_data(slot) : it->second;
  }
  void set(int slot, TermPtr t) { data[slot] = std::move(t); }
};

struct SymVal {
  TermPtr val;
  TermPtr fault;
};

TermPtr wrap_term(const lang::Layout& lay, int slot, TermPtr v) {
  const auto& s = lay.slot(slot);
  if (s.kind == lang::SlotKind::PointerSlot) return v;
  int64_t m = s.hi - s.lo + 1;
  return t_add(t_mod(t_sub(std::move(v), t_int(s.lo)), m), t_int(s.lo));
}

SymVal expr_term(const ExprPtr& e, const SymEnv& env) {
  const auto& lay = env.ip.model().layout();
  switch (e->kind) {
    case ExprKind::IntLit: return {t_int(e->value), t_bool(false)};
    case ExprKind::NullLit: return {t_int(0), t_bool(false)};
    case ExprKind::AddrOfVar:
      return {t_int(lay.slot(lay.slot_of_var(e->name)).addr_id), t_bool(false)};
    case ExprKind::AddrOfCell: {
      SymVal i = expr_term(e->lhs, env);
      int64_t len = lay.array_length(e->name);
      int first = lay.first_cell_slot(e->name);
      TermPtr oob = t_or({t_lt(i.val, t_int(0)), t_le(t_int(len), i.val)});
      return {t_add(i.val, t_int(lay.slot(first).addr_id)),
              t_or({i.fault, oob})};
    }
    case ExprKind::VarRef: return {env.get(lay.slot_of_var(e->name)), t_bool(false)};
    case ExprKind::Deref: {
      TermPtr pv = env.get(lay.slot_of_var(e->name));
      TermPtr bad = t_or({t_le(pv, t_int(0)), t_lt(t_int(lay.addressable_count()), pv)});
      TermPtr sel = env.get(lay.addressable_count() - 1);
      for (int s = lay.addressable_count() - 2; s >= 0; --s)
        sel = t_ite(t_eq(pv, t_int(lay.slot(s).addr_id)), env.get(s), sel);
      return {sel, bad};
    }
    case ExprKind::ArrayRef: {
      SymVal i = expr_term(e->lhs, env);
      int64_t len = lay.array_length(e->name);
      int first = lay.first_cell_slot(e->name);
      TermPtr oob = t_or({t_lt(i.val, t_int(0)), t_le(t_int(len), i.val)});
      TermPtr sel = env.get(first + static_cast<int>(len) - 1);
      for (int64_t k = len - 2; k >= 0; --k)
        sel = t_ite(t_eq(i.val, t_int(k)), env.get(first + static_cast<int>(k)), sel);
      return {sel, t_or({i.fault, oob})};
    }
    case ExprKind::Not: {
      SymVal a = expr_term(e->lhs, env);
      return {t_not(a.val), a.fault};
    }
    case ExprKind::And: {
      // short-circuit: the right side only evaluates (and can only fault)
      // when the left side holds
      SymVal a = expr_term(e->lhs, env);
      SymVal b = expr_term(e->rhs, env);
      return {t_and({a.val, b.val}), t_or({a.fault, t_and({a.val, b.fault})})};
    }
    case ExprKind::Or: {
      SymVal a = expr_term(e->lhs, env);
      SymVal b = expr_term(e->rhs, env);
      return {t_or({a.val, b.val}), t_or({a.fault, t_and({t_not(a.val), b.fault})})};
    }
    default: break;
  }
  SymVal a = expr_term(e->lhs, env);
  SymVal b = expr_term(e->rhs, env);
  TermPtr fault = t_or({a.fault, b.fault});
  switch (e->kind) {
    case ExprKind::Add: return {t_add(a.val, b.val), fault};
    case ExprKind::Sub: return {t_sub(a.val, b.val), fault};
    case ExprKind::Eq: return {t_eq(a.val, b.val), fault};
    case ExprKind::Ne: return {t_not(t_eq(a.val, b.val)), fault};
    case ExprKind::Lt: return {t_lt(a.val, b.val), fault};
    case ExprKind::Le: return {t_le(a.val, b.val), fault};
    case ExprKind::Gt: return {t_lt(b.val, a.val), fault};
    case ExprKind::Ge: return {t_le(b.val, a.val), fault};
    default: throw std::logic_error("expr_term: bad kind");
  }
}

struct Designator {
  TermPtr fault;
  std::vector<std::pair<int, TermPtr>> slots; // (slot, exclusive match condition)
};

Designator addr_term(const AddrExpr& a, const SymEnv& env) {
  const auto& lay = env.ip.model().layout();
  Designator d;
  switch (a.kind) {
    case AddrExpr::Kind::Var:
      d.fault = t_bool(false);
      d.slots.emplace_back(lay.slot_of_var(a.name), t_bool(true));
      return d;
    case AddrExpr::Kind::Cell: {
      SymVal i = expr_term(a.index, env);
      int64_t len = lay.array_length(a.name);
      int first = lay.first_cell_slot(a.name);
      d.fault = t_or({i.fault, t_lt(i.val, t_int(0)), t_le(t_int(len), i.val)});
      for (int64_t k = 0; k < len; ++k)
        d.slots.emplace_back(first + static_cast<int>(k), t_eq(i.val, t_int(k)));
      return d;
    }
    case AddrExpr::Kind::Pointer: {
      TermPtr pv = env.get(lay.slot_of_var(a.name));
      d.fault = t_or({t_le(pv, t_int(0)), t_lt(t_int(lay.addressable_count()), pv)});
      for (int s = 0; s < lay.addressable_count(); ++s)
        d.slots.emplace_back(s, t_eq(pv, t_int(lay.slot(s).addr_id)));
      return d;
    }
  }
  return d;
}

TermPtr select_term(const Designator& d, const SymEnv& env) {
  TermPtr sel = env.get(d.slots.back().first);
  for (int i = static_cast<int>(d.slots.size()) - 2; i >= 0; --i)
    sel = t_ite(d.slots[i].second, env.get(d.slots[i].first), sel);
  return sel;
}

// Condition guards; remote pcs are stable inside a block, data comes from
// the running environment.
TermPtr cond_term(const movers::Condition& c, const SymEnv& env) {
  using movers::Condition;
  switch (c.kind) {
    case Condition::Kind::True: return t_bool(true);
    case Condition::Kind::False: return t_bool(false);
    case Condition::Kind::PcNotAt: {
      std::vector<TermPtr> parts;
      for (int l : c.locs)
        for (int tag = 0; tag < 5; ++tag)
          parts.push_back(t_not(t_eq(t_pc(c.thread), t_int(l * 5 + tag))));
      return t_and(std::move(parts));
    }
    case Condition::Kind::PtrNeq:
      return t_not(t_eq(env.get(c.ptr_a), env.get(c.ptr_b)));
    case Condition::Kind::DerefNeq: {
      Designator d = addr_term(c.addr, env);
      return t_and({t_not(d.fault), t_not(t_eq(select_term(d, env), t_int(c.value)))});
    }
    case Condition::Kind::VarCmp: {
      TermPtr v = env.get(c.var_slot);
      TermPtr r = t_int(c.value);
      switch (c.op) {
        case movers::CmpOp::Eq: return t_eq(v, r);
        case movers::CmpOp::Ne: return t_not(t_eq(v, r));
        case movers::CmpOp::Lt: return t_lt(v, r);
        case movers::CmpOp::Le: return t_le(v, r);
        case movers::CmpOp::Gt: return t_lt(r, v);
        case movers::CmpOp::Ge: return t_le(r, v);
      }
      return t_bool(false);
    }
    case Condition::Kind::And: {
      std::vector<TermPtr> parts;
      for (const auto& p : c.parts) parts.push_back(cond_term(p, env));
      return t_and(std::move(parts));
    }
  }
  return t_bool(false);
}

struct StepTerms {
  TermPtr progress; // guard holds and nothing faults
  TermPtr fault;    // guard faults, or holds while the body faults
};

// Symbolic single-step semantics, mirroring apply_action. Effects are
// written into env and are meaningful under `progress`.
StepTerms action_step(const lang::Action* act, SymEnv& env) {
  if (!act) return {t_bool(true), t_bool(false)};
  const auto& lay = env.ip.model().layout();
  TermPtr when_ok = t_bool(true), when_fault = t_bool(false);
  if (act->when) {
    SymVal w = expr_term(act->when, env);
    when_ok = w.val;
    when_fault = w.fault;
  }
  TermPtr body_fault = t_bool(false);
  switch (act->kind) {
    case ActionKind::Skip:
      break;
    case ActionKind::Assign: {
      Designator d = addr_term(act->lhs, env);
      SymVal v = expr_term(act->rhs, env);
      body_fault = t_or({d.fault, v.fault});
      for (const auto& [slot, match] : d.slots)
        env.set(slot, t_ite(match, wrap_term(lay, slot, v.val), env.get(slot)));
      break;
    }
    case ActionKind::Cas: {
      Designator d = addr_term(act->lhs, env);
      SymVal e = expr_term(act->expected, env);
      SymVal n = expr_term(act->desired, env);
      body_fault = t_or({d.fault, e.fault, n.fault});
      TermPtr cur = select_term(d, env);
      TermPtr hit = t_eq(cur, e.val);
      for (const auto& [slot, match] : d.slots)
        env.set(slot, t_ite(t_and({match, hit}), wrap_term(lay, slot, n.val), env.get(slot)));
      if (!act->result.empty()) {
        int rs = lay.slot_of_var(act->result);
        env.set(rs, t_ite(hit, t_int(lay.wrap(rs, 1)), t_int(lay.wrap(rs, 0))));
      }
      break;
    }
    default:
      throw std::logic_error("action_step: sugar action");
  }
  TermPtr progress = t_and({t_not(when_fault), when_ok, t_not(body_fault)});
  TermPtr fault = t_or({when_fault, t_and({when_ok, body_fault})});
  return {std::move(progress), std::move(fault)};
}

} // namespace

BlockRelation compile_block(const InstrumentedProgram& ip, const Block& b) {
  SymEnv env{ip, {}};
  std::vector<TermPtr> guards;
  for (size_t i = 0; i < b.steps.size(); ++i) {
    const instr::IEdge& e = *b.steps[i];
    if (e.guard) {
      TermPtr g = cond_term(*e.guard, env);
      guards.push_back(e.negated ? t_not(g) : g);
    }
    bool last = i + 1 == b.steps.size();
    if (b.fault_exit && last) {
      SymEnv scratch = env; // the fault keeps the data untouched
      StepTerms st = action_step(e.action, scratch);
      guards.push_back(st.fault);
    } else {
      StepTerms st = action_step(e.action, env);
      guards.push_back(st.progress);
    }
  }
  BlockRelation rel;
  rel.guard = t_and(std::move(guards));
  for (const auto& [slot, term] : env.data) {
    if (term->k == Term::K::DataPre && term->index == slot) continue;
    rel.updates[slot] = term;
  }
  return rel;
}

// ---- script emission ----------------------------------------------------

namespace {

std::string smt_slot_name(const lang::Layout& lay, int slot) {
  const auto& s = lay.slot(slot);
  if (s.kind == lang::SlotKind::Cell) return s.name + "." + std::to_string(s.cell_index);
  return s.name;
}

struct Printer {
  const InstrumentedProgram& ip;
  std::ostream& os;

  void var(const TermPtr& t, int step) {
    if (t->k == Term::K::PcPre)
      os << "pc_" << ip.model().thread(t->index).name << "_" << step;
    else
      os << "v_" << smt_slot_name(ip.model().layout(), t->index) << "_" << step;
  }

  void print(const TermPtr& t, int step) {
    switch (t->k) {
      case Term::K::IntConst:
        if (t->value < 0)
          os << "(- " << -t->value << ")";
        else
          os << t->value;
        return;
      case Term::K::BoolConst: os << (t->value ? "true" : "false"); return;
      case Term::K::PcPre:
      case Term::K::DataPre: var(t, step); return;
      case Term::K::Ite: op("ite", t, step); return;
      case Term::K::Add: op("+", t, step); return;
      case Term::K::Sub: op("-", t, step); return;
      case Term::K::Mod:
        os << "(mod ";
        print(t->args[0], step);
        os << " " << t->value << ")";
        return;
      case Term::K::Eq: op("=", t, step); return;
      case Term::K::Lt: op("<", t, step); return;
      case Term::K::Le: op("<=", t, step); return;
      case Term::K::And: op("and", t, step); return;
      case Term::K::Or: op("or", t, step); return;
      case Term::K::Not: op("not", t, step); return;
    }
  }

  void op(const char* name, const TermPtr& t, int step) {
    os << "(" << name;
    for (const auto& a : t->args) {
      os << " ";
      print(a, step);
    }
    os << ")";
  }
};

std::vector<int> sink_ilocs(const InstrumentedProgram& ip, int thread) {
  int sink = ip.model().thread(thread).sink;
  if (sink < 0) return {};
  return {instr::iloc(sink, Tag::N), instr::iloc(sink, Tag::R), instr::iloc(sink, Tag::L)};
}

} // namespace

std::string emit_bmc(const InstrumentedProgram& ip, int k) {
  if (k < 0) throw std::invalid_argument("bound must be non-negative");
  const auto& m = ip.model();
  const auto& lay = m.layout();
  std::ostringstream os;
  Printer pr{ip, os};

  os << "; location-id table\n";
  for (int ti = 0; ti < ip.thread_count(); ++ti) {
    os << "; thread " << m.thread(ti).name << ":";
    for (int il = 0; il < ip.thread(ti).iloc_count(); ++il)
      os << " " << il << "=" << ip.iloc_name(ti, il);
    os << "\n";
  }
  os << "; address table (pointer values):";
  for (int s = 0; s < lay.addressable_count(); ++s)
    os << " " << lay.slot(s).addr_id << "=&" << lay.slot_name(s);
  os << " 0=null\n";
  os << "(set-logic QF_LIA)\n";

  for (int t = 0; t <= k; ++t) {
    for (int ti = 0; ti < ip.thread_count(); ++ti)
      os << "(declare-fun pc_" << m.thread(ti).name << "_" << t << " () Int)\n";
    for (int s = 0; s < lay.slot_count(); ++s)
      os << "(declare-fun v_" << smt_slot_name(lay, s) << "_" << t << " () Int)\n";
  }

  // Init
  ts::State init = ip.initial();
  os << "(assert (and";
  for (int ti = 0; ti < ip.thread_count(); ++ti)
    os << " (= pc_" << m.thread(ti).name << "_0 " << init.pc[ti] << ")";
  for (int s = 0; s < lay.slot_count(); ++s)
    os << " (= v_" << smt_slot_name(lay, s) << "_0 " << init.data[s] << ")";
  os << "))\n";

  // Blocks
  std::vector<std::vector<Block>> blocks(ip.thread_count());
  std::vector<std::vector<BlockRelation>> rels(ip.thread_count());
  for (int ti = 0; ti < ip.thread_count(); ++ti) {
    blocks[ti] = enumerate_blocks(ip, ti);
    for (const auto& b : blocks[ti]) rels[ti].push_back(compile_block(ip, b));
  }

  auto emit_bad_t = [&](int t) {
    std::vector<std::pair<int, int>> ids;
    for (int ti = 0; ti < ip.thread_count(); ++ti)
      for (int il : sink_ilocs(ip, ti)) ids.emplace_back(ti, il);
    if (ids.empty()) {
      os << "false";
      return;
    }
    os << "(or";
    for (auto [ti, il] : ids) os << " (= pc_" << m.thread(ti).name << "_" << t << " " << il << ")";
    os << ")";
  };

  // Trans
  for (int t = 0; t < k; ++t) {
    os << "(assert (or";
    for (int ti = 0; ti < ip.thread_count(); ++ti) {
      for (size_t bi = 0; bi < blocks[ti].size(); ++bi) {
        const Block& b = blocks[ti][bi];
        const BlockRelation& rel = rels[ti][bi];
        os << "\n  (and (= pc_" << m.thread(ti).name << "_" << t << " " << b.entry << ")";
        // scheduler: exposed locations pin the running thread
        for (int tj = 0; tj < ip.thread_count(); ++tj) {
          if (tj == ti) continue;
          for (int c : ip.thread(tj).exposed)
            os << " (not (= pc_" << m.thread(tj).name << "_" << t << " " << c << "))";
        }
        os << " ";
        pr.print(rel.guard, t);
        os << " (= pc_" << m.thread(ti).name << "_" << (t + 1) << " " << b.exit << ")";
        for (int tj = 0; tj < ip.thread_count(); ++tj) {
          if (tj == ti) continue;
          os << " (= pc_" << m.thread(tj).name << "_" << (t + 1) << " pc_" << m.thread(tj).name
             << "_" << t << ")";
        }
        for (int s = 0; s < lay.slot_count(); ++s) {
          os << " (= v_" << smt_slot_name(lay, s) << "_" << (t + 1) << " ";
          auto it = rel.updates.find(s);
          if (it != rel.updates.end())
            pr.print(it->second, t);
          else
            os << "v_" << smt_slot_name(lay, s) << "_" << t;
          os << ")";
        }
        os << ")";
      }
    }
    // error states stutter, keeping shallow violations visible at full depth
    os << "\n  (and ";
    emit_bad_t(t);
    for (int ti = 0; ti < ip.thread_count(); ++ti)
      os << " (= pc_" << m.thread(ti).name << "_" << (t + 1) << " pc_" << m.thread(ti).name << "_"
         << t << ")";
    for (int s = 0; s < lay.slot_count(); ++s)
      os << " (= v_" << smt_slot_name(lay, s) << "_" << (t + 1) << " v_" << smt_slot_name(lay, s)
         << "_" << t << ")";
    os << ")))\n";
  }

  // ranges
  os << "(assert (and";
  for (int t = 0; t <= k; ++t)
    for (int s = 0; s < lay.slot_count(); ++s) {
      const auto& sl = lay.slot(s);
      os << " (<= ";
      (sl.lo < 0) ? (os << "(- " << -sl.lo << ")") : (os << sl.lo);
      os << " v_" << smt_slot_name(lay, s) << "_" << t << ") (<= v_" << smt_slot_name(lay, s)
         << "_" << t << " " << sl.hi << ")";
    }
  os << "))\n";

  // Bad
  os << "(assert (or";
  for (int t = 0; t <= k; ++t) {
    os << " ";
    emit_bad_t(t);
  }
  os << "))\n(check-sat)\n";
  return os.str();
}

// ---- internal ground decision -------------------------------------------

bool bmc_ground_sat(const InstrumentedProgram& ip, int k, uint64_t budget) {
  std::vector<std::vector<Block>> blocks(ip.thread_count());
  std::vector<std::vector<BlockRelation>> rels(ip.thread_count());
  for (int ti = 0; ti < ip.thread_count(); ++ti) {
    blocks[ti] = enumerate_blocks(ip, ti);
    for (const auto& b : blocks[ti]) rels[ti].push_back(compile_block(ip, b));
  }
  auto bad = [&](const ts::State& s) {
    for (int ti = 0; ti < ip.thread_count(); ++ti)
      for (int il : sink_ilocs(ip, ti))
        if (s.pc[ti] == il) return true;
    return false;
  };

  std::unordered_set<ts::State, ts::StateHash> seen;
  std::vector<ts::State> layer{ip.initial()};
  seen.insert(layer.front());
  for (int depth = 0; depth <= k; ++depth) {
    for (const auto& s : layer)
      if (bad(s)) return true;
    if (depth == k) break;
    std::vector<ts::State> next;
    for (const auto& s : layer) {
      for (int ti = 0; ti < ip.thread_count(); ++ti) {
        bool sched = true;
        for (int tj = 0; tj < ip.thread_count() && sched; ++tj) {
          if (tj == ti) continue;
          if (ip.exposed_loc(tj, s.pc[tj])) sched = false;
        }
        if (!sched) continue;
        for (size_t bi = 0; bi < blocks[ti].size(); ++bi) {
          const Block& b = blocks[ti][bi];
          if (s.pc[ti] != b.entry) continue;
          auto succ = apply_block(ip, b, rels[ti][bi], s);
          if (!succ) continue;
          if (seen.insert(*succ).second) {
            if (seen.size() > budget) throw ts::BudgetExceeded("bmc ground search budget");
            next.push_back(std::move(*succ));
          }
        }
      }
    }
    layer = std::move(next);
  }
  return false;
}

std::optional<ts::State> apply_block(const InstrumentedProgram& ip, const Block& b,
                                     const BlockRelation& rel, const ts::State& s) {
  if (s.pc[b.thread] != b.entry) return std::nullopt;
  GroundState g{&s.pc, &s.data};
  if (!eval_term(rel.guard, g)) return std::nullopt;
  ts::State out = s;
  out.pc[b.thread] = b.exit;
  for (const auto& [slot, term] : rel.updates)
    out.data[slot] = static_cast<int32_t>(eval_term(term, g));
  (void)ip;
  return out;
}

// ---- denotation cross-validation ------------------------------------------

namespace {

void collect_vars(const TermPtr& t, std::set<int>& slots, std::set<int>& threads) {
  if (t->k == Term::K::DataPre) slots.insert(t->index);
  if (t->k == Term::K::PcPre) threads.insert(t->index);
  for (const auto& a : t->args) collect_vars(a, slots, threads);
}

// run the block operationally; nullopt if it does not apply at s
std::optional<lang::Valuation> run_block(const InstrumentedProgram& ip, const Block& b,
                                         const ts::State& s) {
  lang::Valuation data = s.data;
  lang::Valuation next;
  ts::State view = s;
  for (size_t i = 0; i < b.steps.size(); ++i) {
    const instr::IEdge& e = *b.steps[i];
    view.data = data;
    if (e.guard) {
      bool g = movers::eval_condition(*e.guard, view, ip.model(), true);
      if (e.negated) g = !g;
      if (!g) return std::nullopt;
    }
    bool last = i + 1 == b.steps.size();
    lang::Outcome oc = lang::Outcome::Ok;
    if (e.action) {
      oc = lang::apply_action(*e.action, ip.model().layout(), data, next);
      if (oc == lang::Outcome::Ok) data = next;
    }
    if (b.fault_exit && last) {
      if (oc != lang::Outcome::Fault) return std::nullopt;
      return s.data; // faults leave the data untouched
    }
    if (oc != lang::Outcome::Ok) return std::nullopt;
  }
  return data;
}

} // namespace

Denotation block_denotation(const InstrumentedProgram& ip, const Block& b,
                            uint64_t enumeration_cap) {
  const auto& lay = ip.model().layout();
  BlockRelation rel = compile_block(ip, b);

  std::set<int> slot_set, thread_set;
  collect_vars(rel.guard, slot_set, thread_set);
  for (const auto& [slot, term] : rel.updates) {
    slot_set.insert(slot);
    collect_vars(term, slot_set, thread_set);
  }
  thread_set.erase(b.thread); // own pc is fixed to the entry location

  Denotation den;
  den.slots.assign(slot_set.begin(), slot_set.end());
  den.pc_threads.assign(thread_set.begin(), thread_set.end());

  uint64_t total = 1;
  std::vector<std::pair<int64_t, int64_t>> dom; // per enumerated coordinate
  for (int s : den.slots) {
    dom.emplace_back(lay.slot(s).lo, lay.slot(s).hi);
    total *= static_cast<uint64_t>(lay.slot(s).hi - lay.slot(s).lo + 1);
    if (total > enumeration_cap) throw std::runtime_error("block footprint too large to enumerate");
  }
  for (int t : den.pc_threads) {
    dom.emplace_back(0, ip.thread(t).iloc_count() - 1);
    total *= static_cast<uint64_t>(ip.thread(t).iloc_count());
    if (total > enumeration_cap) throw std::runtime_error("block footprint too large to enumerate");
  }

  ts::State state = ip.initial();
  state.pc[b.thread] = b.entry;
  std::vector<int64_t> cur(dom.size());
  for (size_t i = 0; i < dom.size(); ++i) cur[i] = dom[i].first;

  const size_t ns = den.slots.size();
  bool more = true;
  while (more) {
    for (size_t i = 0; i < ns; ++i) state.data[den.slots[i]] = static_cast<int32_t>(cur[i]);
    for (size_t i = 0; i < den.pc_threads.size(); ++i)
      state.pc[den.pc_threads[i]] = static_cast<int32_t>(cur[ns + i]);

    auto op = run_block(ip, b, state);
    GroundState g{&state.pc, &state.data};
    bool enc_ok = eval_term(rel.guard, g) != 0;
    if (op.has_value() != enc_ok) {
      std::ostringstream os;
      os << "block denotation mismatch (applicability) at entry "
         << ip.iloc_name(b.thread, b.entry) << ": interpreter="
         << (op.has_value() ? "applies" : "does not apply")
         << " encoding=" << (enc_ok ? "applies" : "does not apply");
      throw DenotationMismatch(os.str());
    }
    if (enc_ok) {
      lang::Valuation enc_data = state.data;
      for (const auto& [slot, term] : rel.updates)
        enc_data[slot] = static_cast<int32_t>(eval_term(term, g));
      if (enc_data != *op) {
        std::ostringstream os;
        os << "block denotation mismatch (effect) at entry " << ip.iloc_name(b.thread, b.entry);
        for (int s = 0; s < lay.slot_count(); ++s)
          if (enc_data[s] != (*op)[s])
            os << " " << lay.slot_name(s) << ": interpreter=" << (*op)[s]
               << " encoding=" << enc_data[s];
        throw DenotationMismatch(os.str());
      }
      DenotPair pair;
      pair.pre.reserve(dom.size());
      for (int64_t v : cur) pair.pre.push_back(static_cast<int32_t>(v));
      for (int s : den.slots) pair.post.push_back((*op)[s]);
      pair.exit = b.exit;
      den.pairs.push_back(std::move(pair));
    }

    // odometer
    more = false;
    for (size_t i = 0; i < dom.size(); ++i) {
      if (cur[i] < dom[i].second) {
        ++cur[i];
        for (size_t j = 0; j < i; ++j) cur[j] = dom[j].first;
        more = true;
        break;
      }
    }
    if (dom.empty()) break;
  }
  return den;
}

} // namespace dynred::encode
