#include "analysis.hpp"

#include <functional>

namespace dynred::analysis {

using lang::Action;
using lang::ActionKind;
using lang::AddrExpr;
using lang::Expr;
using lang::ExprKind;
using lang::ExprPtr;
using lang::Model;
using lang::SlotKind;

namespace {

// Address values a pointer-typed expression can produce.
void ptr_expr_targets(const ExprPtr& e, const Model& m, const AliasMap& am,
                      std::set<int32_t>& out) {
  const auto& lay = m.layout();
  switch (e->kind) {
    case ExprKind::NullLit:
      out.insert(0);
      return;
    case ExprKind::AddrOfVar:
      out.insert(lay.slot(lay.slot_of_var(e->name)).addr_id);
      return;
    case ExprKind::AddrOfCell: {
      if (e->lhs->kind == ExprKind::IntLit) {
        int s = lay.slot_of_cell(e->name, e->lhs->value);
        if (s >= 0) out.insert(lay.slot(s).addr_id);
        return;
      }
      int64_t len = lay.array_length(e->name);
      int first = lay.first_cell_slot(e->name);
      for (int64_t i = 0; i < len; ++i) out.insert(lay.slot(first + static_cast<int>(i)).addr_id);
      return;
    }
    case ExprKind::VarRef: {
      int s = lay.slot_of_var(e->name);
      auto it = am.may.find(s);
      if (it != am.may.end()) out.insert(it->second.begin(), it->second.end());
      return;
    }
    default:
      return; // int-typed expressions cannot flow into pointers
  }
}

} // namespace

AliasMap may_alias(const Model& m) {
  const auto& lay = m.layout();
  AliasMap am;
  for (int s = 0; s < lay.slot_count(); ++s)
    if (lay.slot(s).kind == SlotKind::PointerSlot) am.may[s] = {lay.slot(s).init};

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : m.edges()) {
      const Action& a = *e.action;
      int target = -1;
      const ExprPtr* src = nullptr;
      if (a.kind == ActionKind::Assign && a.lhs.kind == AddrExpr::Kind::Var &&
          lay.is_pointer(a.lhs.name)) {
        target = lay.slot_of_var(a.lhs.name);
        src = &a.rhs;
      } else if (a.kind == ActionKind::Cas && a.lhs.kind == AddrExpr::Kind::Var &&
                 lay.is_pointer(a.lhs.name)) {
        target = lay.slot_of_var(a.lhs.name);
        src = &a.desired;
      }
      if (target < 0) continue;
      std::set<int32_t> vals;
      ptr_expr_targets(*src, m, am, vals);
      auto& dst = am.may[target];
      size_t before = dst.size();
      dst.insert(vals.begin(), vals.end());
      if (dst.size() != before) changed = true;
    }
  }
  return am;
}

namespace {

struct Footprint {
  const Model& m;
  const AliasMap& am;
  AccessSets out;

  void cells_of(int ptr_slot, std::set<int>& into) const {
    for (int32_t a : am.of(ptr_slot))
      if (a > 0) into.insert(m.layout().addr_to_slot(a));
  }

  void all_cells(const std::string& arr, std::set<int>& into) const {
    int first = m.layout().first_cell_slot(arr);
    for (int64_t i = 0; i < m.layout().array_length(arr); ++i)
      into.insert(first + static_cast<int>(i));
  }

  void read_expr(const ExprPtr& e) {
    if (!e) return;
    const auto& lay = m.layout();
    switch (e->kind) {
      case ExprKind::IntLit:
      case ExprKind::NullLit:
      case ExprKind::AddrOfVar:
        return;
      case ExprKind::AddrOfCell:
        read_expr(e->lhs); // the address computation reads the index only
        return;
      case ExprKind::VarRef:
        out.reads.insert(lay.slot_of_var(e->name));
        return;
      case ExprKind::Deref: {
        int ps = lay.slot_of_var(e->name);
        out.reads.insert(ps);
        cells_of(ps, out.reads);
        return;
      }
      case ExprKind::ArrayRef: {
        read_expr(e->lhs);
        if (e->lhs->kind == ExprKind::IntLit) {
          int s = lay.slot_of_cell(e->name, e->lhs->value);
          if (s >= 0) {
            out.reads.insert(s);
            return;
          }
        }
        all_cells(e->name, out.reads);
        return;
      }
      default:
        read_expr(e->lhs);
        read_expr(e->rhs);
        return;
    }
  }

  // address-computation reads and write-target set of a designator
  void target(const AddrExpr& a, std::set<int>& targets) {
    const auto& lay = m.layout();
    switch (a.kind) {
      case AddrExpr::Kind::Var:
        targets.insert(lay.slot_of_var(a.name));
        return;
      case AddrExpr::Kind::Cell: {
        read_expr(a.index);
        if (a.index->kind == ExprKind::IntLit) {
          int s = lay.slot_of_cell(a.name, a.index->value);
          if (s >= 0) {
            targets.insert(s);
            return;
          }
        }
        all_cells(a.name, targets);
        return;
      }
      case AddrExpr::Kind::Pointer: {
        int ps = lay.slot_of_var(a.name);
        out.reads.insert(ps);
        cells_of(ps, targets);
        return;
      }
    }
  }
};

} // namespace

AccessSets rw_sets(const Action& a, const Model& m, const AliasMap& am) {
  Footprint fp{m, am, {}};
  fp.read_expr(a.when);
  switch (a.kind) {
    case ActionKind::Skip:
      break;
    case ActionKind::Assign: {
      fp.read_expr(a.rhs);
      fp.target(a.lhs, fp.out.writes);
      break;
    }
    case ActionKind::Cas: {
      fp.read_expr(a.expected);
      fp.read_expr(a.desired);
      std::set<int> region;
      fp.target(a.lhs, region);
      fp.out.reads.insert(region.begin(), region.end()); // the compare reads the target
      fp.out.writes.insert(region.begin(), region.end());
      if (!a.result.empty()) fp.out.writes.insert(m.layout().slot_of_var(a.result));
      break;
    }
    default:
      throw std::logic_error("rw_sets: sugar action (missing lower_sugar)");
  }
  return fp.out;
}

bool conflicting(const AccessSets& a, const AccessSets& b) {
  auto meets = [](const std::set<int>& x, const std::set<int>& y) {
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
      if (*i == *j) return true;
      if (*i < *j) ++i; else ++j;
    }
    return false;
  };
  return meets(a.writes, b.reads) || meets(a.writes, b.writes) || meets(b.writes, a.reads);
}

std::vector<std::vector<bool>> reach_closure(const Model& m, int thread) {
  const auto& t = m.thread(thread);
  int n = t.location_count();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int l = 0; l < n; ++l) {
    // BFS from l
    std::vector<int> stack{l};
    r[l][l] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int eid : t.out_edges[u]) {
        int v = m.edge(eid).dst;
        if (!r[l][v]) {
          r[l][v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return r;
}

std::set<int> compute_lfs(const Model& m, int thread) {
  const auto& t = m.thread(thread);
  int n = t.location_count();
  std::set<int> lfs;
  std::vector<int> color(n, 0); // 0 white, 1 gray, 2 black

  // iterative DFS, edges in declaration order
  std::function<void(int)> dfs = [&](int root) {
    struct Frame { int loc; size_t next; };
    std::vector<Frame> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& out = t.out_edges[f.loc];
      if (f.next < out.size()) {
        int v = m.edge(out[f.next++]).dst;
        if (color[v] == 0) {
          color[v] = 1;
          stack.push_back({v, 0});
        } else if (color[v] == 1) {
          lfs.insert(v); // back edge
        }
      } else {
        color[f.loc] = 2;
        stack.pop_back();
      }
    }
  };
  dfs(t.initial);
  for (int l = 0; l < n; ++l)
    if (color[l] == 0) dfs(l);

  for (int l = 0; l < n; ++l)
    if (m.is_terminal(thread, l)) lfs.insert(l);
  return lfs;
}

bool acyclic_without(const Model& m, int thread, const std::set<int>& removed) {
  const auto& t = m.thread(thread);
  int n = t.location_count();
  std::vector<int> color(n, 0);
  bool cyclic = false;
  std::function<void(int)> dfs = [&](int root) {
    struct Frame { int loc; size_t next; };
    std::vector<Frame> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& out = t.out_edges[f.loc];
      if (f.next < out.size()) {
        int v = m.edge(out[f.next++]).dst;
        if (removed.count(v)) continue;
        if (color[v] == 0) {
          color[v] = 1;
          stack.push_back({v, 0});
        } else if (color[v] == 1) {
          cyclic = true;
        }
      } else {
        color[f.loc] = 2;
        stack.pop_back();
      }
    }
  };
  for (int l = 0; l < n && !cyclic; ++l)
    if (color[l] == 0 && !removed.count(l)) dfs(l);
  return !cyclic;
}

Analysis analyze(const Model& m) {
  Analysis an;
  an.alias = may_alias(m);
  an.access.reserve(m.edges().size());
  for (const auto& e : m.edges()) an.access.push_back(rw_sets(*e.action, m, an.alias));
  size_t ne = m.edges().size();
  an.conflict.assign(ne, std::vector<bool>(ne, false));
  for (size_t i = 0; i < ne; ++i)
    for (size_t j = i + 1; j < ne; ++j) {
      if (m.edge(static_cast<int>(i)).thread == m.edge(static_cast<int>(j)).thread) continue;
      bool c = conflicting(an.access[i], an.access[j]);
      an.conflict[i][j] = an.conflict[j][i] = c;
    }
  for (int t = 0; t < m.thread_count(); ++t) {
    an.closure.push_back(reach_closure(m, t));
    an.lfs.push_back(compute_lfs(m, t));
  }
  return an;
}

} // namespace dynred::analysis
