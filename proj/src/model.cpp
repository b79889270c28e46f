#include "model.hpp"

namespace dynred::lang {

Layout::Layout(const Program& p) {
  for (const auto& v : p.vars) {
    var_slot_[v.name] = slot_count();
    slots_.push_back({SlotKind::Scalar, v.name, -1, v.lo, v.hi, static_cast<int32_t>(v.init), 0});
  }
  for (const auto& a : p.arrays) {
    arrays_[a.name] = {slot_count(), a.length};
    for (int64_t i = 0; i < a.length; ++i)
      slots_.push_back({SlotKind::Cell, a.name, static_cast<int>(i), a.lo, a.hi,
                        static_cast<int32_t>(a.init[i]), 0});
  }
  addressable_ = slot_count();
  for (int i = 0; i < addressable_; ++i) slots_[i].addr_id = i + 1;

  for (const auto& q : p.ptrs) {
    int32_t init = 0;
    if (!q.target.empty()) {
      int s = q.target_index < 0 ? slot_of_var(q.target) : slot_of_cell(q.target, q.target_index);
      init = slots_[s].addr_id;
    }
    var_slot_[q.name] = slot_count();
    slots_.push_back({SlotKind::PointerSlot, q.name, -1, 0, addressable_, init, 0});
  }
}

int Layout::slot_of_var(const std::string& name) const {
  auto it = var_slot_.find(name);
  return it == var_slot_.end() ? -1 : it->second;
}

int Layout::slot_of_cell(const std::string& arr, int64_t index) const {
  auto it = arrays_.find(arr);
  if (it == arrays_.end() || index < 0 || index >= it->second.second) return -1;
  return it->second.first + static_cast<int>(index);
}

int Layout::first_cell_slot(const std::string& arr) const { return arrays_.at(arr).first; }

int64_t Layout::array_length(const std::string& arr) const { return arrays_.at(arr).second; }

bool Layout::is_pointer(const std::string& name) const {
  int s = slot_of_var(name);
  return s >= 0 && slots_[s].kind == SlotKind::PointerSlot;
}

Valuation Layout::initial_valuation() const {
  Valuation v(slots_.size());
  for (size_t i = 0; i < slots_.size(); ++i) v[i] = slots_[i].init;
  return v;
}

int32_t Layout::wrap(int slot, int64_t v) const {
  const SlotInfo& s = slots_[slot];
  int64_t m = s.hi - s.lo + 1;
  int64_t r = (v - s.lo) % m;
  if (r < 0) r += m;
  return static_cast<int32_t>(s.lo + r);
}

std::string Layout::slot_name(int i) const {
  const SlotInfo& s = slots_[i];
  if (s.kind == SlotKind::Cell) return s.name + "[" + std::to_string(s.cell_index) + "]";
  return s.name;
}

Model::Model(Program lowered) : prog_(std::move(lowered)), layout_(prog_) {
  threads_.resize(prog_.threads.size());
  for (size_t ti = 0; ti < prog_.threads.size(); ++ti) {
    const ThreadDecl& td = prog_.threads[ti];
    ThreadIndex& ix = threads_[ti];
    ix.name = td.name;
    auto intern = [&](const std::string& n) {
      auto it = ix.loc_ids.find(n);
      if (it != ix.loc_ids.end()) return it->second;
      int id = static_cast<int>(ix.loc_names.size());
      ix.loc_names.push_back(n);
      ix.loc_ids[n] = id;
      return id;
    };
    for (const auto& e : td.edges) {
      intern(e.source);
      intern(e.target);
    }
    if (td.has_sink) intern(kSinkLoc);
    ix.initial = ix.loc_ids.at(td.edges.front().source);
    if (auto it = ix.loc_ids.find(kSinkLoc); it != ix.loc_ids.end()) ix.sink = it->second;
    ix.out_edges.resize(ix.loc_names.size());
    for (const auto& e : td.edges) {
      int id = static_cast<int>(edges_.size());
      edges_.push_back({static_cast<int>(ti), ix.loc_ids.at(e.source), ix.loc_ids.at(e.target),
                        &e.action});
      ix.out_edges[ix.loc_ids.at(e.source)].push_back(id);
    }
  }
}

int Model::thread_id(const std::string& name) const {
  for (int i = 0; i < thread_count(); ++i)
    if (threads_[i].name == name) return i;
  return -1;
}

std::string Model::edge_label(int edge_id) const {
  const EdgeInfo& e = edges_[edge_id];
  const ThreadIndex& t = threads_[e.thread];
  std::string s = t.loc_names[e.src] + ": ";
  if (e.action->when) s += "when (" + expr_to_string(e.action->when) + ") ";
  s += action_to_string(*e.action);
  return s;
}

} // namespace dynred::lang
