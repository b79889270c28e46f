/* dynred: dynamic transaction reduction for a small concurrent language.
 *
 * C interface of the shared library. All functions return a dynred_status;
 * out-parameters receive heap strings owned by the library, released with
 * dynred_string_free. Program handles are opaque and freed with
 * dynred_program_free.
 */
#ifndef DYNRED_H
#define DYNRED_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dynred_program dynred_program;

typedef enum dynred_status {
  DYNRED_OK = 0,          /* safe / success */
  DYNRED_VIOLATED = 1,    /* a reachable error state exists */
  DYNRED_ERR_PARSE = 2,   /* syntax, range, or name error */
  DYNRED_ERR_BUDGET = 3,  /* state budget exceeded */
  DYNRED_ERR_INTERNAL = 4 /* internal invariant failure */
} dynred_status;

typedef enum dynred_check_mode {
  DYNRED_CHECK_FULL = 0,         /* explicit search on the original system */
  DYNRED_CHECK_INSTRUMENTED = 1, /* explicit search on the instrumented system */
  DYNRED_CHECK_REDUCED = 2,      /* block-reduced search */
  DYNRED_CHECK_XREDUCED = 3,     /* block-reduced search over the encoding relation */
  DYNRED_CHECK_CROSS = 4         /* all four engines, verdicts must agree */
} dynred_check_mode;

typedef enum dynred_dump_format {
  DYNRED_DUMP_TEXT = 0,
  DYNRED_DUMP_DOT = 1
} dynred_dump_format;

/* 0 keeps the default budget of 1000000 states. */
#define DYNRED_DEFAULT_BUDGET 0

/* Parse and lower a program. On failure *out is NULL and *error holds the
 * diagnostic. */
dynred_status dynred_program_parse(const char* text, dynred_program** out, char** error);
void dynred_program_free(dynred_program* p);
void dynred_string_free(char* s);

/* Canonical pretty-printed form of the surface syntax (before lowering). */
dynred_status dynred_program_print(const dynred_program* p, char** out);

/* Static analysis report; with_movers adds the per-edge heuristic and
 * dynamic condition. */
dynred_status dynred_analyze(const dynred_program* p, int with_movers, char** out);

/* The instrumented control-flow graphs. */
dynred_status dynred_instrument_dump(const dynred_program* p, dynred_dump_format fmt, char** out);

/* Error reachability. Returns DYNRED_OK (safe) or DYNRED_VIOLATED; the
 * report describes states, metrics, and the witness trace. with_axioms
 * appends the transaction-system axiom table. */
dynred_status dynred_check(const dynred_program* p, dynred_check_mode mode, int with_axioms,
                           uint64_t budget, char** report);

/* SMT-LIB2 bounded model checking script for the block encoding. */
dynred_status dynred_encode(const dynred_program* p, int bound, char** out);

/* Reduction metrics for both block relations. */
dynred_status dynred_stats(const dynred_program* p, uint64_t budget, char** out);

/* Randomized cross-equivalence campaign (seeded, deterministic report).
 * Returns DYNRED_OK if all programs agree. */
dynred_status dynred_bench(uint64_t seed, int count, uint64_t budget, char** report);

const char* dynred_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DYNRED_H */
