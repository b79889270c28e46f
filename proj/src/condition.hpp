#pragma once

#include "explicit_ts.hpp"
#include "model.hpp"

namespace dynred::movers {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

// Dynamic moving conditions: evaluable on concrete states (original or
// instrumented; pc atoms see through instrumentation tags) and directly
// encodable. The AST is conjunctive; instrumented edges carry a separate
// negation flag, so no Not node is needed.
struct Condition {
  enum class Kind { True, False, PcNotAt, PtrNeq, DerefNeq, VarCmp, And };
  Kind kind = Kind::True;

  int thread = -1;             // PcNotAt
  std::vector<int> locs;       // PcNotAt: base location ids, sorted

  int ptr_a = -1, ptr_b = -1;  // PtrNeq: pointer slots

  lang::AddrExpr addr;         // DerefNeq: compared cell; invalid address -> false
  int32_t value = 0;           // DerefNeq / VarCmp constant

  int var_slot = -1;           // VarCmp
  CmpOp op = CmpOp::Eq;

  std::vector<Condition> parts; // And

  static Condition make_true() { return {}; }
  static Condition make_false() {
    Condition c;
    c.kind = Kind::False;
    return c;
  }
  static Condition pc_not_at(int thread, std::vector<int> locs);
  static Condition ptr_neq(int a, int b);
  static Condition deref_neq(lang::AddrExpr a, int32_t v);
  static Condition var_cmp(int slot, CmpOp op, int32_t v);
  static Condition conj(std::vector<Condition> parts);

  bool is_true() const { return kind == Kind::True; }
};

// `instrumented`: pc components are instrumented location ids (base*5+tag).
bool eval_condition(const Condition& c, const ts::State& s, const lang::Model& m,
                    bool instrumented);

std::string condition_to_string(const Condition& c, const lang::Model& m);

} // namespace dynred::movers
