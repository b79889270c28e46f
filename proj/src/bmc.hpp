#pragma once

#include "blocks.hpp"

#include <map>

namespace dynred::encode {

// Ground term language of the encoding. Pre-state variables only: a block
// is compiled to a guard plus an update map over these.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class K {
    IntConst, BoolConst,
    PcPre,   // index = thread
    DataPre, // index = slot
    Ite, Add, Sub, Mod,
    Eq, Lt, Le,
    And, Or, Not,
  };
  K k;
  int64_t value = 0;
  int index = 0;
  std::vector<TermPtr> args;
};

TermPtr t_int(int64_t v);
TermPtr t_bool(bool b);
TermPtr t_pc(int thread);
TermPtr t_data(int slot);
TermPtr t_ite(TermPtr c, TermPtr a, TermPtr b);
TermPtr t_add(TermPtr a, TermPtr b);
TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_mod(TermPtr a, int64_t m);
TermPtr t_eq(TermPtr a, TermPtr b);
TermPtr t_lt(TermPtr a, TermPtr b);
TermPtr t_le(TermPtr a, TermPtr b);
TermPtr t_and(std::vector<TermPtr> xs);
TermPtr t_or(std::vector<TermPtr> xs);
TermPtr t_not(TermPtr a);

struct GroundState {
  const std::vector<int32_t>* pc;
  const lang::Valuation* data;
};

int64_t eval_term(const TermPtr& t, const GroundState& g);

// One block as a symbolic transition: applicable iff guard holds on the
// pre-state; the post-state rewrites exactly the slots in `updates`.
struct BlockRelation {
  TermPtr guard;
  std::map<int, TermPtr> updates;
};

BlockRelation compile_block(const instr::InstrumentedProgram& ip, const Block& b);

// The full SMT-LIB2 script: location table comment, QF_LIA, per-step
// declarations, Init, Trans_0..k-1, ranges, Bad, check-sat.
std::string emit_bmc(const instr::InstrumentedProgram& ip, int k);

// Internal satisfiability decision of the emitted system: ground path
// enumeration over the compiled block relations, error within k steps.
bool bmc_ground_sat(const instr::InstrumentedProgram& ip, int k,
                    uint64_t budget = ts::kDefaultBudget);

class DenotationMismatch : public std::runtime_error {
public:
  explicit DenotationMismatch(const std::string& w) : std::runtime_error(w) {}
};

struct DenotPair {
  std::vector<int32_t> pre;  // values of the block's footprint slots
  std::vector<int32_t> post;
  int exit;
};

struct Denotation {
  std::vector<int> slots;       // footprint slot ids (pre/post are indexed by these)
  std::vector<int> pc_threads;  // remote threads whose pc the guard reads
  std::vector<DenotPair> pairs;
};

// Enumerates the block's finite footprint and computes the denotation two
// ways: operationally (interpreter) and from the compiled constraint
// system. Throws DenotationMismatch if they differ.
Denotation block_denotation(const instr::InstrumentedProgram& ip, const Block& b,
                            uint64_t enumeration_cap = 4000000);

// Apply one compiled block to a full concrete state; nullopt if the guard
// fails. Used to cross-check the encoded relation against the explicit one.
std::optional<ts::State> apply_block(const instr::InstrumentedProgram& ip, const Block& b,
                                     const BlockRelation& rel, const ts::State& s);

} // namespace dynred::encode
