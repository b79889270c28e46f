#include "dynred/dynred.h"

#include "campaign.hpp"
#include "report.hpp"

#include <cstdlib>
#include <cstring>

using namespace dynred;

// The handle keeps the surface syntax (for printing) and the compiled
// pipeline over the lowered program.
struct dynred_program {
  lang::Program surface;
  Pipeline pipeline;

  explicit dynred_program(lang::Program parsed)
      : surface(parsed), pipeline(lang::lower_sugar(surface)) {}
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

uint64_t effective_budget(uint64_t budget) {
  if (budget != 0) return budget;
  if (const char* env = std::getenv("DYNRED_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return ts::kDefaultBudget;
}

template <typename Fn>
dynred_status guarded(char** out, Fn&& fn) {
  try {
    return fn();
  } catch (const ts::BudgetExceeded& e) {
    if (out) *out = dup_string(std::string("budget exceeded: ") + e.what());
    return DYNRED_ERR_BUDGET;
  } catch (const std::exception& e) {
    if (out) *out = dup_string(std::string("internal error: ") + e.what());
    return DYNRED_ERR_INTERNAL;
  }
}

} // namespace

extern "C" {

dynred_status dynred_program_parse(const char* text, dynred_program** out, char** error) {
  if (out) *out = nullptr;
  if (error) *error = nullptr;
  if (!text || !out) {
    if (error) *error = dup_string("null argument");
    return DYNRED_ERR_INTERNAL;
  }
  try {
    lang::Program p = lang::parse_program(text);
    *out = new dynred_program(std::move(p));
    return DYNRED_OK;
  } catch (const lang::ParseError& e) {
    if (error) *error = dup_string(e.what());
    return DYNRED_ERR_PARSE;
  } catch (const std::exception& e) {
    if (error) *error = dup_string(e.what());
    return DYNRED_ERR_INTERNAL;
  }
}

void dynred_program_free(dynred_program* p) { delete p; }

void dynred_string_free(char* s) { std::free(s); }

dynred_status dynred_program_print(const dynred_program* p, char** out) {
  if (!p || !out) return DYNRED_ERR_INTERNAL;
  return guarded(out, [&] {
    *out = dup_string(lang::print_program(p->surface));
    return DYNRED_OK;
  });
}

dynred_status dynred_analyze(const dynred_program* p, int with_movers, char** out) {
  if (!p || !out) return DYNRED_ERR_INTERNAL;
  return guarded(out, [&] {
    *out = dup_string(report::analyze(p->pipeline, with_movers != 0));
    return DYNRED_OK;
  });
}

dynred_status dynred_instrument_dump(const dynred_program* p, dynred_dump_format fmt, char** out) {
  if (!p || !out) return DYNRED_ERR_INTERNAL;
  return guarded(out, [&] {
    if (fmt == DYNRED_DUMP_DOT) {
      *out = dup_string(ts::dump_dot_icfg(*p->pipeline.ip));
    } else {
      std::string text;
      const auto& ip = *p->pipeline.ip;
      for (int ti = 0; ti < ip.thread_count(); ++ti) {
        text += "thread " + ip.model().thread(ti).name + ":\n";
        for (const auto& vec : ip.thread(ti).out)
          for (const auto& e : vec) {
            text += "  " + ip.iloc_name(ti, e.src) + " -[";
            if (e.guard) {
              text += e.negated ? "!(" : "";
              text += movers::condition_to_string(*e.guard, ip.model());
              text += e.negated ? ")" : "";
            } else {
              text += "true";
            }
            text += "] ";
            text += e.action && e.orig_edge >= 0 ? lang::action_to_string(*e.action) : "-";
            text += " -> " + ip.iloc_name(ti, e.dst) + "\n";
          }
      }
      *out = dup_string(text);
    }
    return DYNRED_OK;
  });
}

dynred_status dynred_check(const dynred_program* p, dynred_check_mode mode, int with_axioms,
                           uint64_t budget, char** report_out) {
  if (!p || !report_out) return DYNRED_ERR_INTERNAL;
  *report_out = nullptr;
  return guarded(report_out, [&]() -> dynred_status {
    const uint64_t b = effective_budget(budget);
    const Pipeline& pl = p->pipeline;
    std::string text;
    bool violated = false;
    switch (mode) {
      case DYNRED_CHECK_FULL: {
        ts::OriginalSemantics sem(pl.model);
        auto ts = ts::build_ts(sem, b);
        violated = ts::reach_error(ts).violated;
        text = report::verdict(ts, sem);
        break;
      }
      case DYNRED_CHECK_INSTRUMENTED: {
        instr::InstrumentedSemantics sem(*pl.ip);
        auto ts = ts::build_ts(sem, b);
        violated = ts::reach_error(ts).violated;
        text = report::verdict(ts, sem);
        if (with_axioms) text += report::axioms_table(pl, ts);
        break;
      }
      case DYNRED_CHECK_REDUCED:
      case DYNRED_CHECK_XREDUCED: {
        auto r = reduce::reduced_reach(*pl.ip,
                                       mode == DYNRED_CHECK_REDUCED ? reduce::Relation::BrTrans
                                                                    : reduce::Relation::XTrans,
                                       b);
        violated = r.violated;
        text = report::reduced(r);
        break;
      }
      case DYNRED_CHECK_CROSS: {
        auto r = axioms::check_cross_equivalence(pl.model, b);
        violated = r.original;
        text = report::cross(r);
        if (!r.ok) {
          *report_out = dup_string(text);
          return DYNRED_ERR_INTERNAL;
        }
        break;
      }
    }
    if (with_axioms && mode != DYNRED_CHECK_INSTRUMENTED) {
      instr::InstrumentedSemantics sem(*pl.ip);
      auto ts = ts::build_ts(sem, b);
      text += report::axioms_table(pl, ts);
    }
    *report_out = dup_string(text);
    return violated ? DYNRED_VIOLATED : DYNRED_OK;
  });
}

dynred_status dynred_encode(const dynred_program* p, int bound, char** out) {
  if (!p || !out) return DYNRED_ERR_INTERNAL;
  return guarded(out, [&]() -> dynred_status {
    if (bound < 0) {
      *out = dup_string("bound must be non-negative");
      return DYNRED_ERR_PARSE;
    }
    *out = dup_string(encode::emit_bmc(*p->pipeline.ip, bound));
    return DYNRED_OK;
  });
}

dynred_status dynred_stats(const dynred_program* p, uint64_t budget, char** out) {
  if (!p || !out) return DYNRED_ERR_INTERNAL;
  return guarded(out, [&] {
    *out = dup_string(report::stats(p->pipeline, effective_budget(budget)));
    return DYNRED_OK;
  });
}

dynred_status dynred_bench(uint64_t seed, int count, uint64_t budget, char** report_out) {
  if (!report_out) return DYNRED_ERR_INTERNAL;
  return guarded(report_out, [&]() -> dynred_status {
    auto res = bench::run_campaign(seed, count, effective_budget(budget));
    *report_out = dup_string(res.report);
    return res.ok ? DYNRED_OK : DYNRED_ERR_INTERNAL;
  });
}

const char* dynred_version(void) { return "dynred 0.1.0"; }

} // extern "C"
