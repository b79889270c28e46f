#pragma once

#include "ast.hpp"

#include <cstdint>

namespace dynred::bench {

// Deterministic generator for the randomized cross-equivalence campaign:
// 2-3 threads, 2-4 locations per thread, 2-3 shared scalars with domains of
// at most 4 values, assignments/guards/cas, loops, and an optional global
// assertion. Scalar-only on purpose; fault paths are covered by the fixed
// corpus.
lang::Program random_program(uint64_t seed);

} // namespace dynred::bench
