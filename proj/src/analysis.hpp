#pragma once

#include "model.hpp"

#include <set>

namespace dynred::analysis {

// May-point-to sets per pointer slot. Values are address ids (0 = null).
struct AliasMap {
  std::map<int, std::set<int32_t>> may; // pointer slot -> address values

  const std::set<int32_t>& of(int ptr_slot) const { return may.at(ptr_slot); }
  bool contains(int ptr_slot, int32_t addr) const { return may.at(ptr_slot).count(addr) != 0; }
};

// Syntactic read/write footprint of one action, in slot ids. Dereferences
// contribute the pointer slot plus the whole may-set of the pointer.
struct AccessSets {
  std::set<int> reads;
  std::set<int> writes;
};

struct Analysis {
  AliasMap alias;
  std::vector<AccessSets> access;                 // per global edge
  std::vector<std::vector<bool>> conflict;        // edge x edge, symmetric
  std::vector<std::vector<std::vector<bool>>> closure; // per thread: loc x loc
  std::vector<std::set<int>> lfs;                 // per thread: location ids
};

AliasMap may_alias(const lang::Model& m);

AccessSets rw_sets(const lang::Action& a, const lang::Model& m, const AliasMap& am);

// writes(a) meets accesses(b), or vice versa
bool conflicting(const AccessSets& a, const AccessSets& b);

// reflexive-transitive closure of a thread's location graph
std::vector<std::vector<bool>> reach_closure(const lang::Model& m, int thread);

// DFS back-edge targets plus every terminal non-sink location
std::set<int> compute_lfs(const lang::Model& m, int thread);

// true iff the thread's location graph is acyclic once `removed` is deleted
bool acyclic_without(const lang::Model& m, int thread, const std::set<int>& removed);

Analysis analyze(const lang::Model& m);

} // namespace dynred::analysis
