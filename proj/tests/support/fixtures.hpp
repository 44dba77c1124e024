// Shared test fixtures: the reference decision-rule program, perf-data
// builders, and compile helpers used across the suites.
#pragma once

#include "macrocell/compiler.hpp"
#include "macrocell/perfdata.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace macrocell::testing {

// Frozen copy of the rack-manager decision rule. Suites compare this
// against the library's embedded source so neither copy can drift.
extern const char *const kDecisionRuleSource;

// Frozen facts about the compiled decision rule, derived by hand from the
// opcode encoding and the cost model (uniform cost 1, overhead 50):
//   external region: ground 1 byte + calculator 10 x 2 bytes = 21
//   code: 41 instructions, 10 two-operand + 19 one-operand + 12 bare = 197
//   wcet: 4 (cond) + max(3, 2 + 10*(4+22+5) + 4) + 1 (halt) + 50 = 371
inline constexpr uint32_t kDecisionRuleExternalBytes = 21;
inline constexpr uint32_t kDecisionRuleLocalBytes = 1;
inline constexpr uint32_t kDecisionRuleCodeBytes = 197;
inline constexpr uint64_t kDecisionRuleWcetUniform = 371;

PlatformType makePlatform(std::string hardwareType = "CPU-A",
                          std::string hardwareVersion = "1");

// Perf data with every opcode at `cost`, built directly from the op table.
PerfData uniformPerf(PlatformType platform = makePlatform(), uint64_t overhead = 50,
                     uint64_t cost = 1);

// Renders perf data back to its `key = value` file format.
std::string perfText(const PerfData &perf);

// Compiles or aborts with the diagnostics on stderr. For fixtures whose
// sources are known-good; never used to observe failures.
CompileOutput compileOrDie(std::string_view source, const std::vector<PerfData> &perfSet);

// The analyzed form of known-good source.
TypedProgram analyzeOrDie(std::string_view source);

} // namespace macrocell::testing
