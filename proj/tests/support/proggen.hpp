// Random trap-free program generator for differential and budget fuzzing.
//
// Generated programs never trap at runtime by construction:
//   - division only by nonzero integer literals
//   - dynamic array indices only through an enclosing loop variable whose
//     literal range is contained in every generated array's bounds
//   - expression nesting bounded far below the operand stack limit
// so any trap observed while running one is a defect in the pipeline.
#pragma once

#include "macrocell/perfdata.hpp"

#include <random>
#include <string>

namespace macrocell::testing {

struct GenOptions {
    int maxStmts = 12;       // top-level statement budget
    int maxDepth = 3;        // if/for nesting
    int maxExprDepth = 3;    // expression tree height
    bool controlFlow = true; // false: assignments only (deterministic paths)
};

// Source text for a well-formed program over a fixed pool of external and
// local declarations with randomized array bounds.
std::string generateProgram(std::mt19937 &rng, const GenOptions &options);

// Perf data with random per-op costs in [minCost, maxCost] and a random
// request overhead in [0, maxOverhead].
PerfData randomPerf(std::mt19937 &rng, uint64_t minCost = 1, uint64_t maxCost = 100,
                    uint64_t maxOverhead = 200);

} // namespace macrocell::testing
