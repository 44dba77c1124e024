// macrocell/wcet.hpp - structural worst-case execution time analysis.
#pragma once

#include "macrocell/codegen.hpp"
#include "macrocell/expected.hpp"
#include "macrocell/perfdata.hpp"

#include <cstdint>
#include <string>

namespace macrocell {

struct WcetError {
    enum Kind { MissingOpcode, Overflow } kind;
    std::string detail;
};

// requestOverhead + W(root), where W composes over the structure map:
//   W(range)  = sum of per-instruction costs
//   W(seq)    = sum of parts
//   W(branch) = W(cond) + max(W(then), W(else))   (absent else counts 0)
//   W(loop)   = W(init) + trip * (W(test) + W(body) + W(incr)) + W(test)
// Exact integer arithmetic; overflow is reported, never wrapped.
Expected<uint64_t, WcetError> computeWcet(const MacroCode &code, const StructureMap &map,
                                          const PerfData &perf);

} // namespace macrocell
