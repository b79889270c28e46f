#pragma once

#include "axioms.hpp"

namespace dynred::bench {

struct CampaignResult {
  bool ok = true;
  int passed = 0, failed = 0, skipped = 0; // skipped: budget exceeded
  std::string report;                      // one line per seed, plus a summary
};

// Randomized cross-equivalence campaign: for `count` seeded programs, the
// verdicts of the original system, the instrumented system, and both block
// reductions must agree. Jobs run on a bounded worker pool; the report is
// deterministic for a fixed seed.
CampaignResult run_campaign(uint64_t seed, int count, uint64_t budget, int workers = 0);

} // namespace dynred::bench
