#pragma once

#include "axioms.hpp"
#include "bmc.hpp"
#include "dot.hpp"

#include <memory>

namespace dynred {

// Everything the engines need for one lowered program, built once.
struct Pipeline {
  lang::Model model;
  analysis::Analysis an;
  movers::MoverSynthesis syn;
  std::unique_ptr<instr::InstrumentedProgram> ip;

  explicit Pipeline(lang::Program lowered)
      : model(std::move(lowered)),
        an(analysis::analyze(model)),
        syn(movers::synthesize_all(model, an)),
        ip(std::make_unique<instr::InstrumentedProgram>(model, an, syn)) {}
};

namespace report {

std::string verdict(const ts::TransitionSystem& ts, const ts::Semantics& sem);
std::string reduced(const reduce::ReducedResult& r);
std::string cross(const axioms::CrossReport& r);
std::string analyze(const Pipeline& p, bool movers);
std::string axioms_table(const Pipeline& p, const ts::TransitionSystem& instr_ts);
std::string stats(const Pipeline& p, uint64_t budget);

} // namespace report
} // namespace dynred
