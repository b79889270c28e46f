#include "blocks.hpp"

#include <functional>

namespace dynred::encode {

using instr::IEdge;
using instr::InstrumentedProgram;
using instr::Tag;

bool is_block_boundary(const InstrumentedProgram& ip, int thread, int il) {
  if (instr::tag_of(il) == Tag::N) return true;
  if (instr::base_of(il) == ip.model().thread(thread).sink) return true;
  return ip.exposed_loc(thread, il);
}

namespace {

bool step_can_fault(const InstrumentedProgram& ip, const IEdge& e) {
  if (!e.action) return false;
  return lang::action_can_fault(*e.action, ip.model().program());
}

} // namespace

std::vector<Block> enumerate_blocks(const InstrumentedProgram& ip, int thread) {
  const auto& it = ip.thread(thread);
  const int sink = ip.model().thread(thread).sink;
  std::vector<Block> out;
  std::vector<const IEdge*> path;

  std::function<void(int, int)> walk = [&](int entry, int il) {
    for (const IEdge& e : it.out[il]) {
      path.push_back(&e);
      if (sink >= 0 && step_can_fault(ip, e)) {
        Block b{thread, entry, instr::iloc(sink, Tag::L), path, true};
        out.push_back(std::move(b));
      }
      if (is_block_boundary(ip, thread, e.dst)) {
        out.push_back({thread, entry, e.dst, path, false});
      } else {
        walk(entry, e.dst); // acyclic by the refined feedback set
      }
      path.pop_back();
    }
  };

  for (int il = 0; il < it.iloc_count(); ++il)
    if (is_block_boundary(ip, thread, il) && !it.out[il].empty()) walk(il, il);
  return out;
}

} // namespace dynred::encode
