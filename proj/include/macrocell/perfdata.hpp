// macrocell/perfdata.hpp - elementary performance data: per-instruction
// worst-case costs and request-analysis overhead for one platform type.
#pragma once

#include "macrocell/expected.hpp"
#include "macrocell/isa.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace macrocell {

// A platform type groups every target on which macro-code timing is
// identical: hardware type/version, OS type/version, container version.
struct PlatformType {
    std::string hardwareType;
    std::string hardwareVersion;
    std::string osType;
    std::string osVersion;
    std::string containerVersion;

    // The five fields joined by '/'. Fields may not contain '/', so two
    // platform types are equal exactly when their identities are.
    std::string identity() const;
    bool operator==(const PlatformType &) const = default;
};

using CostTable = std::array<uint64_t, kOpCount>;

struct PerfData {
    PlatformType platform;
    uint64_t requestOverhead = 0;           // time units spent analyzing a request
    std::map<std::string, uint64_t> opCosts; // mnemonic -> positive cost

    uint64_t costOf(OpCode op) const;
    CostTable costTable() const; // indexed by opcode ordinal, for the interpreter
};

struct PerfError {
    enum Kind {
        MissingOpcode,
        UnknownKey,
        DuplicateKey,
        MalformedValue,
        MissingPlatformField,
        MissingOverhead,
    } kind;
    std::string detail;
    int line = 0;
};

const char *perfErrorName(PerfError::Kind kind);

// Line-oriented `key = value` text, `#` comments. Required keys:
//   platform.hardware_type / hardware_version / os_type / os_version /
//   platform.container_version, overhead.request, and op.<MNEMONIC> for
//   every instruction in the ISA. Unknown and duplicate keys are errors.
Expected<PerfData, PerfError> parsePerfData(std::string_view text);

std::string platformIdentity(const PerfData &perf);

} // namespace macrocell
