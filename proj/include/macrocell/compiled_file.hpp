// macrocell/compiled_file.hpp - the data-loadable compilation artifact:
// header + macro-code + platform/WCET table.
#pragma once

#include "macrocell/isa.hpp"
#include "macrocell/perfdata.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace macrocell {

inline constexpr std::array<uint8_t, 4> kMagic = {'M', 'C', 'F', 0};
inline constexpr uint16_t kFormatVersion = 1;

struct PlatformEntry {
    PlatformType platform;
    uint64_t wcet = 0; // includes request-analysis overhead
    bool operator==(const PlatformEntry &) const = default;
};

struct WcetTable {
    std::vector<PlatformEntry> entries; // identities pairwise distinct
    bool operator==(const WcetTable &) const = default;

    // Index of the entry whose identity matches, or -1.
    int find(const std::string &identity) const;
};

struct Header {
    uint16_t formatVersion = kFormatVersion;
    std::string compilerType;
    std::string compilerVersion;
    uint32_t macroCodeLength = 0;
    uint32_t externalVarSize = 0;
    uint32_t localVarSize = 0;
    uint16_t platformTypeCount = 0;
    uint32_t contentChecksum = 0; // CRC-32 over macro-code + platform table
    bool operator==(const Header &) const = default;
};

struct CompiledFile {
    Header header;
    MacroCode code;
    WcetTable table;
    bool operator==(const CompiledFile &) const = default;
};

} // namespace macrocell
