#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynred::lang {

// Expressions are immutable trees shared freely between program copies.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  IntLit,    // value
  NullLit,   // the null address (0)
  AddrOfVar, // &x  (x a scalar; also &p for a pointer slot in cas targets)
  AddrOfCell,// &A[e]
  VarRef,    // x or p (read the slot by name)
  Deref,     // *p
  ArrayRef,  // A[e]
  Not,
  Add, Sub,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
};

struct Expr {
  ExprKind kind;
  int64_t value = 0;       // IntLit
  std::string name;        // AddrOf*/VarRef/Deref/ArrayRef
  ExprPtr lhs, rhs;        // binary ops; unary uses lhs; ArrayRef/AddrOfCell index in lhs

  static ExprPtr lit(int64_t v);
  static ExprPtr null();
  static ExprPtr addr_of(std::string var);
  static ExprPtr addr_of_cell(std::string arr, ExprPtr idx);
  static ExprPtr var(std::string name);
  static ExprPtr deref(std::string ptr);
  static ExprPtr array(std::string arr, ExprPtr idx);
  static ExprPtr un(ExprKind k, ExprPtr e);
  static ExprPtr bin(ExprKind k, ExprPtr a, ExprPtr b);
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
std::string expr_to_string(const ExprPtr& e);

// An address-valued designator: the target of a write, or of a cas.
struct AddrExpr {
  enum class Kind {
    Var,     // the slot of a named scalar (or pointer, for cas targets)
    Cell,    // a cell of a named array, index evaluated dynamically
    Pointer, // the cell a pointer currently refers to (*p)
  };
  Kind kind = Kind::Var;
  std::string name;
  ExprPtr index; // Cell only

  static AddrExpr var(std::string n) { return {Kind::Var, std::move(n), nullptr}; }
  static AddrExpr cell(std::string a, ExprPtr i) { return {Kind::Cell, std::move(a), std::move(i)}; }
  static AddrExpr pointer(std::string p) { return {Kind::Pointer, std::move(p), nullptr}; }
};

bool addr_equal(const AddrExpr& a, const AddrExpr& b);
std::string addr_to_string(const AddrExpr& a);

enum class ActionKind {
  Skip,
  Assign,
  Cas,
  // Sugar, removed by lower_sugar:
  Assert,
  Start,
  Join,
};

struct Action {
  ExprPtr when;               // enabling guard; null means always enabled
  ActionKind kind = ActionKind::Skip;
  AddrExpr lhs;               // Assign target / Cas target
  ExprPtr rhs;                // Assign value
  ExprPtr expected, desired;  // Cas
  std::string result;         // Cas result variable (optional, empty if absent)
  ExprPtr cond;               // Assert
  std::string thread;         // Start/Join

  static Action skip() { return {}; }
  static Action guard(ExprPtr b) { Action a; a.when = std::move(b); return a; }
  static Action assign(AddrExpr l, ExprPtr r);
  static Action cas(AddrExpr t, ExprPtr e, ExprPtr n, std::string res = {});
};

bool action_equal(const Action& a, const Action& b);
std::string action_to_string(const Action& a); // statement part, without "when"/goto

struct Edge {
  std::string source;
  Action action;
  std::string target;
};

struct ThreadDecl {
  std::string name;
  std::vector<Edge> edges; // declaration order; first source label is the initial location
  // Lowering metadata (not part of the surface syntax): the thread has an
  // error sink, reachable from assert branches or memory faults.
  bool has_sink = false;
};

struct VarDecl {
  std::string name;
  int64_t lo = 0, hi = 0;
  int64_t init = 0;
};

struct ArrayDecl {
  std::string name;
  int64_t length = 0;
  int64_t lo = 0, hi = 0;
  std::vector<int64_t> init; // length entries
};

struct PtrDecl {
  std::string name;
  // initial target: empty name = null; index < 0 = scalar target
  std::string target;
  int64_t target_index = -1;
};

struct Program {
  std::vector<VarDecl> vars;
  std::vector<ArrayDecl> arrays;
  std::vector<PtrDecl> ptrs;
  std::vector<ThreadDecl> threads;
  ExprPtr property; // trailing assert(...), woven by lower_sugar; may be null
};

bool program_equal(const Program& a, const Program& b);
std::string print_program(const Program& p);

// Reserved location names introduced by lowering. Apart from "end" (the
// terminal named by the grammar) they are not parseable identifiers, so
// user programs can never collide with them.
inline const std::string kSinkLoc = "!err";
inline const std::string kEndLoc = "end";
inline const std::string kEntryLoc = "!start";

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line), col(col) {}
  int line, col;
};

// parse_program: text -> syntax tree. Sugar (assert/start/join) is preserved.
Program parse_program(const std::string& text);

// lower_sugar: expands assert/start/join, weaves the global property at
// thread-final locations, rewrites `*p++`-free forms (the parser already
// folds ++), and materializes error sinks where they can be reached.
Program lower_sugar(const Program& p);

// the action may take the fault transition (null dereference or an index
// that can leave its array)
bool action_can_fault(const Action& a, const Program& p);

} // namespace dynred::lang
