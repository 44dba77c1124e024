// macrocell/layout.hpp - packed variable layout (no padding anywhere).
#pragma once

#include "macrocell/sema.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace macrocell {

struct LayoutEntry {
    std::string name;
    uint32_t offset = 0;
    uint32_t size = 0;
    bool operator==(const LayoutEntry &) const = default;
};

// External and local variables live in two separate offset spaces (two
// regions). Variables are packed in declaration order, struct fields in
// field order; array element k sits at (k - lo) * elementSize.
struct VariableLayout {
    std::vector<LayoutEntry> externals;
    std::vector<LayoutEntry> locals;
    uint32_t externalTotal = 0;
    uint32_t localTotal = 0;
};

VariableLayout layoutVariables(const TypedProgram &program);

// Byte offset of a field within a struct element (packed, field order).
uint32_t fieldOffset(const StructType &type, std::string_view fieldName);

} // namespace macrocell
