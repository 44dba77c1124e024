// macrocell/layout_io.hpp - textual sidecar describing a compiled program's
// variable layout, so a host can bind named variables to region offsets
// without the source.
//
// Format, one entry per line:
//   external <name> offset=<n> size=<n> type=<type>
//   local    <name> offset=<n> size=<n> type=<type>
//   external_total <n>
//   local_total <n>
// where <type> is bool|int8|int16|int32, optionally struct{f:t,...}, and
// arrays append [lo..hi]. Blank lines and lines starting with '#' are
// ignored.
#pragma once

#include "macrocell/ast.hpp"
#include "macrocell/expected.hpp"
#include "macrocell/layout.hpp"

#include <string>
#include <vector>

namespace macrocell {

struct BoundVar {
    std::string name;
    bool isLocal;
    uint32_t offset;
    VarType type;
};

struct LayoutFile {
    std::vector<BoundVar> vars;
    uint32_t externalTotal = 0;
    uint32_t localTotal = 0;
};

std::string formatVarType(const VarType &type);

// Renders the sidecar from a typed program's layout.
std::string emitLayoutFile(const TypedProgram &program, const VariableLayout &layout);

struct LayoutParseError {
    int line; // 1-based
    std::string message;
};

Expected<LayoutFile, LayoutParseError> parseLayoutFile(std::string_view text);

} // namespace macrocell
