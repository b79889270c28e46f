#include "campaign.hpp"

#include "random_prog.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace dynred::bench {

CampaignResult run_campaign(uint64_t seed, int count, uint64_t budget, int workers) {
  if (workers <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    workers = hw ? static_cast<int>(std::min(hw, 8u)) : 4;
  }

  struct JobResult {
    bool ok = true, skipped = false;
    std::string line;
  };
  std::vector<JobResult> results(count);
  std::atomic<int> next{0};

  auto work = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      uint64_t s = seed + static_cast<uint64_t>(i);
      JobResult& r = results[i];
      std::ostringstream os;
      os << "seed " << s << ": ";
      try {
        lang::Program prog = lower_sugar(random_program(s));
        lang::Model m(std::move(prog));
        auto rep = axioms::check_cross_equivalence(m, budget);
        if (rep.ok) {
          os << "ok " << (rep.original ? "VIOLATED" : "SAFE") << " (original "
             << rep.original_states << ", instrumented " << rep.instrumented_states
             << ", brtrans " << rep.brtrans_states << ", xtrans " << rep.xtrans_states
             << " states)";
        } else {
          r.ok = false;
          os << "MISMATCH " << rep.detail;
        }
      } catch (const ts::BudgetExceeded& e) {
        r.skipped = true;
        os << "skipped (" << e.what() << ")";
      }
      r.line = os.str();
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  CampaignResult res;
  std::ostringstream os;
  for (const auto& r : results) {
    os << r.line << "\n";
    if (r.skipped)
      ++res.skipped;
    else if (r.ok)
      ++res.passed;
    else {
      ++res.failed;
      res.ok = false;
    }
  }
  os << "campaign: " << (res.ok ? "ok" : "FAILED") << " (" << res.passed << " passed, "
     << res.failed << " failed, " << res.skipped << " skipped)\n";
  res.report = os.str();
  return res;
}

} // namespace dynred::bench
