#include "macrocell/perfdata.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace macrocell {

std::string PlatformType::identity() const {
    return hardwareType + '/' + hardwareVersion + '/' + osType + '/' + osVersion + '/' +
           containerVersion;
}

uint64_t PerfData::costOf(OpCode op) const {
    auto it = opCosts.find(opInfo(op).mnemonic);
    return it == opCosts.end() ? 0 : it->second;
}

CostTable PerfData::costTable() const {
    CostTable table{};
    for (size_t i = 0; i < kOpCount; i++) table[i] = costOf(opTable()[i].op);
    return table;
}

const char *perfErrorName(PerfError::Kind kind) {
    switch (kind) {
    case PerfError::MissingOpcode: return "MissingOpcode";
    case PerfError::UnknownKey: return "UnknownKey";
    case PerfError::DuplicateKey: return "DuplicateKey";
    case PerfError::MalformedValue: return "MalformedValue";
    case PerfError::MissingPlatformField: return "MissingPlatformField";
    case PerfError::MissingOverhead: return "MissingOverhead";
    }
    return "?";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parseUint(std::string_view text, uint64_t &out) {
    if (text.empty()) return false;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && end == text.data() + text.size();
}

} // namespace

Expected<PerfData, PerfError> parsePerfData(std::string_view text) {
    PerfData perf;
    std::set<std::string, std::less<>> seenKeys;
    std::set<std::string> platformSeen;
    bool overheadSeen = false;

    int lineNo = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        lineNo++;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            return PerfError{PerfError::MalformedValue, std::string(line), lineNo};
        std::string key{trim(line.substr(0, eq))};
        std::string_view value = trim(line.substr(eq + 1));

        if (!seenKeys.insert(key).second) return PerfError{PerfError::DuplicateKey, key, lineNo};

        if (key.starts_with("platform.")) {
            std::string field = key.substr(9);
            std::string *slot = nullptr;
            if (field == "hardware_type") slot = &perf.platform.hardwareType;
            else if (field == "hardware_version") slot = &perf.platform.hardwareVersion;
            else if (field == "os_type") slot = &perf.platform.osType;
            else if (field == "os_version") slot = &perf.platform.osVersion;
            else if (field == "container_version") slot = &perf.platform.containerVersion;
            if (!slot) return PerfError{PerfError::UnknownKey, key, lineNo};
            if (value.empty() || value.find('/') != std::string_view::npos)
                return PerfError{PerfError::MalformedValue, key, lineNo};
            *slot = std::string(value);
            platformSeen.insert(field);
            continue;
        }
        if (key == "overhead.request") {
            if (!parseUint(value, perf.requestOverhead))
                return PerfError{PerfError::MalformedValue, key, lineNo};
            overheadSeen = true;
            continue;
        }
        if (key.starts_with("op.")) {
            std::string mnemonic = key.substr(3);
            if (!opInfoByMnemonic(mnemonic)) return PerfError{PerfError::UnknownKey, key, lineNo};
            uint64_t cost = 0;
            if (!parseUint(value, cost) || cost == 0)
                return PerfError{PerfError::MalformedValue, key, lineNo};
            perf.opCosts[mnemonic] = cost;
            continue;
        }
        return PerfError{PerfError::UnknownKey, key, lineNo};
    }

    for (const char *field : {"hardware_type", "hardware_version", "os_type", "os_version",
                              "container_version"})
        if (!platformSeen.count(field)) return PerfError{PerfError::MissingPlatformField, field};
    if (!overheadSeen) return PerfError{PerfError::MissingOverhead, "overhead.request"};
    for (const OpInfo &info : opTable())
        if (!perf.opCosts.count(info.mnemonic))
            return PerfError{PerfError::MissingOpcode, info.mnemonic};

    return perf;
}

std::string platformIdentity(const PerfData &perf) { return perf.platform.identity(); }

} // namespace macrocell
