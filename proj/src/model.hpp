#pragma once

#include "ast.hpp"

#include <map>

namespace dynred::lang {

using Valuation = std::vector<int32_t>;

enum class SlotKind { Scalar, Cell, PointerSlot };

struct SlotInfo {
  SlotKind kind;
  std::string name;    // scalar/pointer name, or the array name for cells
  int cell_index = -1; // cells only
  int64_t lo = 0, hi = 0;
  int32_t init = 0;
  int addr_id = 0;     // 1-based address value; 0 = not addressable (pointer slots)
};

// Slot layout of a program: scalars, then array cells, then pointer slots.
// Address values are 0 (null) and 1..addressable_count(), where address i
// names slot i-1.
class Layout {
public:
  Layout() = default;
  explicit Layout(const Program& p);

  int slot_count() const { return static_cast<int>(slots_.size()); }
  int addressable_count() const { return addressable_; }
  const SlotInfo& slot(int i) const { return slots_[i]; }
  int slot_of_var(const std::string& name) const;
  int slot_of_cell(const std::string& arr, int64_t index) const; // -1 if out of range
  int first_cell_slot(const std::string& arr) const;
  int64_t array_length(const std::string& arr) const;
  bool is_pointer(const std::string& name) const;
  int addr_to_slot(int32_t addr) const { return addr - 1; } // valid for 1..addressable

  Valuation initial_valuation() const;
  int32_t wrap(int slot, int64_t v) const;
  std::string slot_name(int i) const; // "x", "T[2]", "p"

private:
  std::vector<SlotInfo> slots_;
  std::map<std::string, int> var_slot_;
  std::map<std::string, std::pair<int, int64_t>> arrays_; // name -> (first cell slot, length)
  int addressable_ = 0;
};

struct ThreadIndex {
  std::string name;
  std::vector<std::string> loc_names;
  std::map<std::string, int> loc_ids;
  int initial = 0;
  int sink = -1; // error location, or -1
  std::vector<std::vector<int>> out_edges; // per location, global edge ids in decl order
  int location_count() const { return static_cast<int>(loc_names.size()); }
};

struct EdgeInfo {
  int thread;
  int src, dst; // location ids within the thread
  const Action* action;
};

// Semantic index over a lowered program: slot layout, location ids, and a
// global edge table. Immutable once built.
class Model {
public:
  explicit Model(Program lowered);
  Model(const Model&) = delete; // edge table borrows from prog_
  Model& operator=(const Model&) = delete;

  const Program& program() const { return prog_; }
  const Layout& layout() const { return layout_; }
  int thread_count() const { return static_cast<int>(threads_.size()); }
  const ThreadIndex& thread(int i) const { return threads_[i]; }
  const std::vector<EdgeInfo>& edges() const { return edges_; }
  const EdgeInfo& edge(int id) const { return edges_[id]; }
  int thread_id(const std::string& name) const;

  // no outgoing edges and not the error sink
  bool is_terminal(int thread, int loc) const {
    return threads_[thread].out_edges[loc].empty() && loc != threads_[thread].sink;
  }
  bool has_outgoing(int thread, int loc) const { return !threads_[thread].out_edges[loc].empty(); }

  std::string edge_label(int edge_id) const;

private:
  Program prog_;
  Layout layout_;
  std::vector<ThreadIndex> threads_;
  std::vector<EdgeInfo> edges_;
};

} // namespace dynred::lang
