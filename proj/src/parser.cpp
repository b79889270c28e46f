#include "ast.hpp"

#include <cctype>
#include <map>
#include <set>

namespace dynred::lang {

namespace {

enum class Tok {
  Ident, Int,
  KwVar, KwArray, KwPtr, KwInt, KwNull, KwThread, KwWhen, KwSkip, KwCas,
  KwAssert, KwStart, KwJoin, KwGoto, KwEnd,
  Colon, Semi, Comma, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Assign,     // :=
  PlusPlus,   // ++
  Plus, Minus, Amp, Star, Bang,
  EqEq, NotEq, Lt, Le, Gt, Ge, AndAnd, OrOr,
  DotDot, EqSign,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  int64_t value = 0;
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : src(s) { advance(); }

  const Token& peek() const { return tok; }
  Token take() {
    Token t = tok;
    advance();
    return t;
  }

private:
  void advance() {
    skip_ws();
    tok.line = line;
    tok.col = col;
    if (pos >= src.size()) {
      tok.kind = Tok::Eof;
      return;
    }
    char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        bump();
      tok.text = src.substr(start, pos - start);
      tok.kind = keyword(tok.text);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) bump();
      tok.text = src.substr(start, pos - start);
      tok.kind = Tok::Int;
      tok.value = std::stoll(tok.text);
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos + 1 < src.size() && src[pos + 1] == b;
    };
    if (two(':', '=')) { bump(); bump(); tok.kind = Tok::Assign; return; }
    if (two('+', '+')) { bump(); bump(); tok.kind = Tok::PlusPlus; return; }
    if (two('=', '=')) { bump(); bump(); tok.kind = Tok::EqEq; return; }
    if (two('!', '=')) { bump(); bump(); tok.kind = Tok::NotEq; return; }
    if (two('<', '=')) { bump(); bump(); tok.kind = Tok::Le; return; }
    if (two('>', '=')) { bump(); bump(); tok.kind = Tok::Ge; return; }
    if (two('&', '&')) { bump(); bump(); tok.kind = Tok::AndAnd; return; }
    if (two('|', '|')) { bump(); bump(); tok.kind = Tok::OrOr; return; }
    if (two('.', '.')) { bump(); bump(); tok.kind = Tok::DotDot; return; }
    bump();
    switch (c) {
      case ':': tok.kind = Tok::Colon; return;
      case ';': tok.kind = Tok::Semi; return;
      case ',': tok.kind = Tok::Comma; return;
      case '(': tok.kind = Tok::LParen; return;
      case ')': tok.kind = Tok::RParen; return;
      case '{': tok.kind = Tok::LBrace; return;
      case '}': tok.kind = Tok::RBrace; return;
      case '[': tok.kind = Tok::LBracket; return;
      case ']': tok.kind = Tok::RBracket; return;
      case '+': tok.kind = Tok::Plus; return;
      case '-': tok.kind = Tok::Minus; return;
      case '&': tok.kind = Tok::Amp; return;
      case '*': tok.kind = Tok::Star; return;
      case '!': tok.kind = Tok::Bang; return;
      case '<': tok.kind = Tok::Lt; return;
      case '>': tok.kind = Tok::Gt; return;
      case '=': tok.kind = Tok::EqSign; return;
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }

  static Tok keyword(const std::string& s) {
    static const std::map<std::string, Tok> kw = {
        {"var", Tok::KwVar},       {"array", Tok::KwArray}, {"ptr", Tok::KwPtr},
        {"int", Tok::KwInt},       {"null", Tok::KwNull},   {"thread", Tok::KwThread},
        {"when", Tok::KwWhen},     {"skip", Tok::KwSkip},   {"cas", Tok::KwCas},
        {"assert", Tok::KwAssert}, {"start", Tok::KwStart}, {"join", Tok::KwJoin},
        {"goto", Tok::KwGoto},     {"end", Tok::KwEnd},
    };
    auto it = kw.find(s);
    return it == kw.end() ? Tok::Ident : it->second;
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '/' && pos + 1 < src.size() && src[pos + 1] == '/') {
        while (pos < src.size() && src[pos] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  Token tok;
};

enum class Ty { Int, Ptr, Bool };

class Parser {
public:
  explicit Parser(const std::string& text) : lex(text) {}

  Program run() {
    Program p;
    while (is_decl()) parse_decl(p);
    if (peek().kind != Tok::KwThread) fail("expected a declaration or 'thread'");
    while (peek().kind == Tok::KwThread) parse_thread(p);
    if (peek().kind == Tok::KwAssert) {
      take();
      expect(Tok::LParen, "(");
      Token at = peek();
      p.property = parse_expr();
      check_type(p.property, Ty::Bool, at);
      expect(Tok::RParen, ")");
      expect(Tok::Semi, ";");
    }
    if (peek().kind != Tok::Eof) fail("trailing input after program");
    resolve_targets(p);
    return p;
  }

private:
  Lexer lex;
  std::set<std::string> names; // vars, arrays, ptrs, threads share one namespace
  std::map<std::string, Ty> var_ty;
  std::set<std::string> array_names;
  // deferred goto-target checks: (thread index, target, position)
  struct PendingTarget { size_t thread; std::string label; int line, col; };
  std::vector<PendingTarget> pending;

  const Token& peek() { return lex.peek(); }
  Token take() { return lex.take(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(lex.peek().line, lex.peek().col, msg);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.col, msg);
  }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected '") + what + "'");
    return take();
  }

  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected an identifier");
    return take().text;
  }

  bool is_decl() {
    Tok k = peek().kind;
    return k == Tok::KwVar || k == Tok::KwArray || k == Tok::KwPtr;
  }

  void declare(const Token& at, const std::string& n) {
    if (!names.insert(n).second) fail_at(at, "duplicate name '" + n + "'");
  }

  int64_t parse_int() {
    bool neg = false;
    if (peek().kind == Tok::Minus) { take(); neg = true; }
    Token t = expect(Tok::Int, "integer");
    return neg ? -t.value : t.value;
  }

  void parse_decl(Program& p) {
    Token kw = take();
    Token nt = peek();
    std::string name = expect_ident();
    declare(nt, name);
    switch (kw.kind) {
      case Tok::KwVar: {
        expect(Tok::Colon, ":");
        expect(Tok::KwInt, "int");
        expect(Tok::LBracket, "[");
        int64_t lo = parse_int();
        expect(Tok::DotDot, "..");
        int64_t hi = parse_int();
        expect(Tok::RBracket, "]");
        if (lo > hi) fail_at(nt, "empty range for '" + name + "'");
        int64_t init = (lo <= 0 && 0 <= hi) ? 0 : lo;
        if (peek().kind == Tok::EqSign) {
          take();
          Token vt = peek();
          init = parse_int();
          if (init < lo || init > hi)
            fail_at(vt, "initial value " + std::to_string(init) + " outside range of '" + name + "'");
        }
        expect(Tok::Semi, ";");
        p.vars.push_back({name, lo, hi, init});
        var_ty[name] = Ty::Int;
        break;
      }
      case Tok::KwArray: {
        expect(Tok::LBracket, "[");
        int64_t len = parse_int();
        expect(Tok::RBracket, "]");
        if (len < 1) fail_at(nt, "array '" + name + "' must have positive length");
        expect(Tok::Colon, ":");
        expect(Tok::KwInt, "int");
        expect(Tok::LBracket, "[");
        int64_t lo = parse_int();
        expect(Tok::DotDot, "..");
        int64_t hi = parse_int();
        expect(Tok::RBracket, "]");
        if (lo > hi) fail_at(nt, "empty range for '" + name + "'");
        std::vector<int64_t> init(len, (lo <= 0 && 0 <= hi) ? 0 : lo);
        if (peek().kind == Tok::EqSign) {
          take();
          expect(Tok::LBrace, "{");
          init.clear();
          for (;;) {
            Token vt = peek();
            int64_t v = parse_int();
            if (v < lo || v > hi)
              fail_at(vt, "initial value " + std::to_string(v) + " outside range of '" + name + "'");
            init.push_back(v);
            if (peek().kind != Tok::Comma) break;
            take();
          }
          expect(Tok::RBrace, "}");
          if (static_cast<int64_t>(init.size()) != len)
            fail_at(nt, "array '" + name + "' initializer has wrong length");
        }
        expect(Tok::Semi, ";");
        p.arrays.push_back({name, len, lo, hi, std::move(init)});
        array_names.insert(name);
        break;
      }
      case Tok::KwPtr: {
        PtrDecl d{name, "", -1};
        if (peek().kind == Tok::EqSign) {
          take();
          if (peek().kind == Tok::KwNull) {
            take();
          } else {
            expect(Tok::Amp, "&");
            Token tt = peek();
            d.target = expect_ident();
            if (peek().kind == Tok::LBracket) {
              take();
              d.target_index = parse_int();
              expect(Tok::RBracket, "]");
              auto arr = find_array(d.target);
              if (!arr) fail_at(tt, "unknown array '" + d.target + "'");
              if (d.target_index < 0 || d.target_index >= arr->length)
                fail_at(tt, "index outside '" + d.target + "'");
            } else {
              if (var_ty.count(d.target) == 0 || var_ty[d.target] != Ty::Int)
                fail_at(tt, "unknown scalar '" + d.target + "'");
            }
          }
        }
        expect(Tok::Semi, ";");
        p.ptrs.push_back(std::move(d));
        var_ty[name] = Ty::Ptr;
        break;
      }
      default: fail("expected a declaration");
    }
    // keep a program handle for array lookups during later decls
    prog = &p;
  }

  const Program* prog = nullptr;
  const ArrayDecl* find_array(const std::string& n) const {
    if (!prog) return nullptr;
    for (const auto& a : prog->arrays)
      if (a.name == n) return &a;
    return nullptr;
  }

  void parse_thread(Program& p) {
    take(); // thread
    Token nt = peek();
    std::string name = expect_ident();
    declare(nt, name);
    expect(Tok::LBrace, "{");
    ThreadDecl t;
    t.name = name;
    if (peek().kind == Tok::RBrace)
      fail_at(nt, "thread '" + name + "' has no edges (no initial location)");
    while (peek().kind != Tok::RBrace) {
      Edge e = parse_edge(p.threads.size());
      t.edges.push_back(std::move(e));
    }
    take(); // }
    p.threads.push_back(std::move(t));
  }

  Edge parse_edge(size_t thread_idx) {
    Token lt = peek();
    if (lt.kind == Tok::KwEnd) fail_at(lt, "'end' is reserved for the terminal location");
    std::string label = expect_ident();
    expect(Tok::Colon, ":");
    Edge e;
    e.source = label;
    if (peek().kind == Tok::KwWhen) {
      take();
      expect(Tok::LParen, "(");
      Token at = peek();
      e.action.when = parse_expr();
      check_type(e.action.when, Ty::Bool, at);
      expect(Tok::RParen, ")");
    }
    parse_stmt(e.action);
    expect(Tok::KwGoto, "goto");
    if (peek().kind == Tok::KwEnd) {
      take();
      e.target = kEndLoc;
    } else {
      Token tt = peek();
      e.target = expect_ident();
      pending.push_back({thread_idx, e.target, tt.line, tt.col});
    }
    expect(Tok::Semi, ";");
    return e;
  }

  void parse_stmt(Action& a) {
    switch (peek().kind) {
      case Tok::KwSkip:
        take();
        a.kind = ActionKind::Skip;
        return;
      case Tok::KwCas: {
        take();
        expect(Tok::LParen, "(");
        Token tt = peek();
        AddrExpr target = parse_cas_target();
        Ty elem = target_elem_type(target, tt);
        expect(Tok::Comma, ",");
        Token et = peek();
        ExprPtr expected = parse_expr();
        check_type(expected, elem, et);
        expect(Tok::Comma, ",");
        Token dt = peek();
        ExprPtr desired = parse_expr();
        check_type(desired, elem, dt);
        std::string res;
        if (peek().kind == Tok::Comma) {
          take();
          Token rt = peek();
          res = expect_ident();
          if (var_ty.count(res) == 0 || var_ty[res] != Ty::Int)
            fail_at(rt, "cas result must be a scalar variable");
        }
        expect(Tok::RParen, ")");
        a.kind = ActionKind::Cas;
        a.lhs = std::move(target);
        a.expected = std::move(expected);
        a.desired = std::move(desired);
        a.result = std::move(res);
        return;
      }
      case Tok::KwAssert: {
        take();
        expect(Tok::LParen, "(");
        Token at = peek();
        a.cond = parse_expr();
        check_type(a.cond, Ty::Bool, at);
        expect(Tok::RParen, ")");
        a.kind = ActionKind::Assert;
        return;
      }
      case Tok::KwStart:
        take();
        a.kind = ActionKind::Start;
        a.thread = expect_ident();
        return;
      case Tok::KwJoin:
        take();
        a.kind = ActionKind::Join;
        a.thread = expect_ident();
        return;
      default: {
        Token lt = peek();
        AddrExpr l = parse_lval(lt);
        if (peek().kind == Tok::PlusPlus) {
          take(); // lval++  =>  lval := lval + 1
          if (lval_elem_type(l, lt) != Ty::Int) fail_at(lt, "'++' needs an integer target");
          a = Action::assign(l, Expr::bin(ExprKind::Add, lval_read(l), Expr::lit(1)));
          a.when = nullptr;
          return;
        }
        expect(Tok::Assign, ":=");
        Token rt = peek();
        ExprPtr r = parse_expr();
        check_type(r, lval_elem_type(l, lt), rt);
        a.kind = ActionKind::Assign;
        a.lhs = std::move(l);
        a.rhs = std::move(r);
        return;
      }
    }
  }

  AddrExpr parse_lval(const Token& at) {
    if (peek().kind == Tok::Star) {
      take();
      std::string p = expect_ident();
      if (var_ty.count(p) == 0 || var_ty[p] != Ty::Ptr) fail_at(at, "'*' needs a pointer");
      return AddrExpr::pointer(p);
    }
    std::string n = expect_ident();
    if (peek().kind == Tok::LBracket) {
      take();
      Token it = peek();
      ExprPtr idx = parse_expr();
      check_type(idx, Ty::Int, it);
      expect(Tok::RBracket, "]");
      if (array_names.count(n) == 0) fail_at(at, "unknown array '" + n + "'");
      return AddrExpr::cell(n, std::move(idx));
    }
    if (var_ty.count(n) == 0) fail_at(at, "unknown identifier '" + n + "'");
    return AddrExpr::var(n);
  }

  AddrExpr parse_cas_target() {
    if (peek().kind == Tok::Amp) {
      take();
      Token nt = peek();
      std::string n = expect_ident();
      if (peek().kind == Tok::LBracket) {
        take();
        Token it = peek();
        ExprPtr idx = parse_expr();
        check_type(idx, Ty::Int, it);
        expect(Tok::RBracket, "]");
        if (array_names.count(n) == 0) fail_at(nt, "unknown array '" + n + "'");
        return AddrExpr::cell(n, std::move(idx));
      }
      if (var_ty.count(n) == 0) fail_at(nt, "unknown identifier '" + n + "'");
      return AddrExpr::var(n);
    }
    Token nt = peek();
    std::string n = expect_ident();
    if (var_ty.count(n) == 0 || var_ty[n] != Ty::Ptr)
      fail_at(nt, "cas target must be a pointer or &slot");
    return AddrExpr::pointer(n);
  }

  Ty lval_elem_type(const AddrExpr& l, const Token& at) {
    switch (l.kind) {
      case AddrExpr::Kind::Var: return var_ty.at(l.name); // scalar: Int, pointer: Ptr
      case AddrExpr::Kind::Cell:
      case AddrExpr::Kind::Pointer: return Ty::Int;
    }
    fail_at(at, "bad lvalue");
  }

  Ty target_elem_type(const AddrExpr& t, const Token& at) { return lval_elem_type(t, at); }

  ExprPtr lval_read(const AddrExpr& l) {
    switch (l.kind) {
      case AddrExpr::Kind::Var: return Expr::var(l.name);
      case AddrExpr::Kind::Cell: return Expr::array(l.name, l.index);
      case AddrExpr::Kind::Pointer: return Expr::deref(l.name);
    }
    return nullptr;
  }

  // precedence-climbing expression parser
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (peek().kind == Tok::OrOr) {
      Token t = take();
      ExprPtr r = parse_and();
      require(e, Ty::Bool, t);
      require(r, Ty::Bool, t);
      e = Expr::bin(ExprKind::Or, e, r);
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_cmp();
    while (peek().kind == Tok::AndAnd) {
      Token t = take();
      ExprPtr r = parse_cmp();
      require(e, Ty::Bool, t);
      require(r, Ty::Bool, t);
      e = Expr::bin(ExprKind::And, e, r);
    }
    return e;
  }

  ExprPtr parse_cmp() {
    ExprPtr e = parse_add();
    ExprKind k;
    switch (peek().kind) {
      case Tok::EqEq: k = ExprKind::Eq; break;
      case Tok::NotEq: k = ExprKind::Ne; break;
      case Tok::Lt: k = ExprKind::Lt; break;
      case Tok::Le: k = ExprKind::Le; break;
      case Tok::Gt: k = ExprKind::Gt; break;
      case Tok::Ge: k = ExprKind::Ge; break;
      default: return e;
    }
    Token t = take();
    ExprPtr r = parse_add();
    Ty lt = type_of(e, t), rt = type_of(r, t);
    if (lt != rt) fail_at(t, "comparison between incompatible types");
    if (lt == Ty::Ptr && k != ExprKind::Eq && k != ExprKind::Ne)
      fail_at(t, "pointers only support == and !=");
    if (lt == Ty::Bool) fail_at(t, "cannot compare boolean expressions");
    return Expr::bin(k, e, r);
  }

  ExprPtr parse_add() {
    ExprPtr e = parse_unary();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Token t = take();
      ExprPtr r = parse_unary();
      require(e, Ty::Int, t);
      require(r, Ty::Int, t);
      e = Expr::bin(t.kind == Tok::Plus ? ExprKind::Add : ExprKind::Sub, e, r);
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (peek().kind == Tok::Bang) {
      Token t = take();
      ExprPtr e = parse_unary();
      require(e, Ty::Bool, t);
      return Expr::un(ExprKind::Not, e);
    }
    if (peek().kind == Tok::Minus) {
      take();
      Token t = expect(Tok::Int, "integer literal after unary '-'");
      return Expr::lit(-t.value);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Int:
        take();
        return Expr::lit(t.value);
      case Tok::KwNull:
        take();
        return Expr::null();
      case Tok::LParen: {
        take();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, ")");
        return e;
      }
      case Tok::Amp: {
        take();
        Token nt = peek();
        std::string n = expect_ident();
        if (peek().kind == Tok::LBracket) {
          take();
          Token it = peek();
          ExprPtr idx = parse_expr();
          check_type(idx, Ty::Int, it);
          expect(Tok::RBracket, "]");
          if (array_names.count(n) == 0) fail_at(nt, "unknown array '" + n + "'");
          return Expr::addr_of_cell(n, idx);
        }
        if (var_ty.count(n) == 0 || var_ty[n] != Ty::Int)
          fail_at(nt, "'&' needs a scalar or array cell");
        return Expr::addr_of(n);
      }
      case Tok::Star: {
        take();
        Token nt = peek();
        std::string n = expect_ident();
        if (var_ty.count(n) == 0 || var_ty[n] != Ty::Ptr) fail_at(nt, "'*' needs a pointer");
        return Expr::deref(n);
      }
      case Tok::Ident: {
        take();
        if (peek().kind == Tok::LBracket) {
          take();
          Token it = peek();
          ExprPtr idx = parse_expr();
          check_type(idx, Ty::Int, it);
          expect(Tok::RBracket, "]");
          if (array_names.count(t.text) == 0) fail_at(t, "unknown array '" + t.text + "'");
          return Expr::array(t.text, idx);
        }
        if (var_ty.count(t.text) == 0) fail_at(t, "unknown identifier '" + t.text + "'");
        return Expr::var(t.text);
      }
      default:
        fail("expected an expression");
    }
  }

  Ty type_of(const ExprPtr& e, const Token& at) const {
    switch (e->kind) {
      case ExprKind::IntLit: return Ty::Int;
      case ExprKind::NullLit:
      case ExprKind::AddrOfVar:
      case ExprKind::AddrOfCell: return Ty::Ptr;
      case ExprKind::VarRef: return var_ty.at(e->name);
      case ExprKind::Deref:
      case ExprKind::ArrayRef:
      case ExprKind::Add:
      case ExprKind::Sub: return Ty::Int;
      case ExprKind::Not:
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Eq:
      case ExprKind::Ne:
      case ExprKind::Lt:
      case ExprKind::Le:
      case ExprKind::Gt:
      case ExprKind::Ge: return Ty::Bool;
    }
    fail_at(at, "bad expression");
  }

  void require(const ExprPtr& e, Ty want, const Token& at) const {
    if (type_of(e, at) != want) {
      const char* w = want == Ty::Int ? "integer" : want == Ty::Ptr ? "pointer" : "boolean";
      fail_at(at, std::string("expected a ") + w + " expression");
    }
  }

  void check_type(const ExprPtr& e, Ty want, const Token& at) const { require(e, want, at); }

  void resolve_targets(const Program& p) {
    for (const auto& pt : pending) {
      const ThreadDecl& t = p.threads[pt.thread];
      bool found = false;
      for (const auto& e : t.edges)
        if (e.source == pt.label) { found = true; break; }
      if (!found)
        throw ParseError(pt.line, pt.col,
                         "unknown identifier: goto target '" + pt.label + "' is not a label");
    }
  }
};

} // namespace

Program parse_program(const std::string& text) {
  Parser p(text);
  return p.run();
}

} // namespace dynred::lang
