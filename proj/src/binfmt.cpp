#include "macrocell/binfmt.hpp"

#include <cstring>
#include <optional>
#include <set>

namespace macrocell {

int WcetTable::find(const std::string &identity) const {
    for (size_t i = 0; i < entries.size(); i++)
        if (entries[i].platform.identity() == identity) return static_cast<int>(i);
    return -1;
}

const char *binErrorName(BinError::Kind kind) {
    switch (kind) {
    case BinError::Kind::Truncated: return "Truncated";
    case BinError::Kind::BadMagic: return "BadMagic";
    case BinError::Kind::UnsupportedFormatVersion: return "UnsupportedFormatVersion";
    case BinError::Kind::ChecksumMismatch: return "ChecksumMismatch";
    case BinError::Kind::BadMacroCode: return "BadMacroCode";
    case BinError::Kind::InconsistentHeader: return "InconsistentHeader";
    case BinError::Kind::FieldOverflow: return "FieldOverflow";
    case BinError::Kind::TrailingBytes: return "TrailingBytes";
    }
    return "?";
}

namespace {

struct CrcTable {
    uint32_t entries[256];
    CrcTable() {
        for (uint32_t i = 0; i < 256; i++) {
            uint32_t value = i;
            for (int bit = 0; bit < 8; bit++)
                value = (value >> 1) ^ ((value & 1) ? 0xEDB88320u : 0u);
            entries[i] = value;
        }
    }
};

const CrcTable kCrc;

void putU16(std::vector<uint8_t> &out, uint16_t value) {
    out.push_back(static_cast<uint8_t>(value));
    out.push_back(static_cast<uint8_t>(value >> 8));
}

void putU32(std::vector<uint8_t> &out, uint32_t value) {
    for (int i = 0; i < 4; i++) out.push_back(static_cast<uint8_t>(value >> (8 * i)));
}

void putU64(std::vector<uint8_t> &out, uint64_t value) {
    for (int i = 0; i < 8; i++) out.push_back(static_cast<uint8_t>(value >> (8 * i)));
}

bool putString(std::vector<uint8_t> &out, const std::string &text) {
    if (text.size() > 0xFFFF) return false;
    putU16(out, static_cast<uint16_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    return true;
}

// nullopt when a string exceeds the u16 length prefix.
std::optional<std::vector<uint8_t>> tableBytes(const WcetTable &table) {
    std::vector<uint8_t> out;
    for (const PlatformEntry &entry : table.entries) {
        const PlatformType &p = entry.platform;
        for (const std::string *field : {&p.hardwareType, &p.hardwareVersion, &p.osType,
                                         &p.osVersion, &p.containerVersion})
            if (!putString(out, *field)) return std::nullopt;
        putU64(out, entry.wcet);
    }
    return out;
}

struct Reader {
    std::span<const uint8_t> bytes;
    size_t pos = 0;
    bool truncated = false;

    bool need(size_t count) {
        if (bytes.size() - pos < count) {
            truncated = true;
            return false;
        }
        return true;
    }

    uint16_t u16() {
        if (!need(2)) return 0;
        uint16_t value = uint16_t(bytes[pos]) | uint16_t(bytes[pos + 1]) << 8;
        pos += 2;
        return value;
    }

    uint32_t u32() {
        if (!need(4)) return 0;
        uint32_t value = 0;
        for (int i = 0; i < 4; i++) value |= uint32_t(bytes[pos + i]) << (8 * i);
        pos += 4;
        return value;
    }

    uint64_t u64() {
        if (!need(8)) return 0;
        uint64_t value = 0;
        for (int i = 0; i < 8; i++) value |= uint64_t(bytes[pos + i]) << (8 * i);
        pos += 8;
        return value;
    }

    std::string string() {
        uint16_t length = u16();
        if (truncated || !need(length)) return {};
        std::string value(reinterpret_cast<const char *>(bytes.data() + pos), length);
        pos += length;
        return value;
    }

    std::span<const uint8_t> slice(size_t count) {
        if (!need(count)) return {};
        std::span<const uint8_t> value = bytes.subspan(pos, count);
        pos += count;
        return value;
    }
};

Expected<Header, BinError> readHeader(Reader &reader) {
    if (!reader.need(4)) return BinError{BinError::Kind::Truncated, "magic"};
    if (std::memcmp(reader.bytes.data(), kMagic.data(), 4) != 0)
        return BinError{BinError::Kind::BadMagic, "first four bytes are not MCF\\0"};
    reader.pos = 4;

    Header header;
    header.formatVersion = reader.u16();
    if (reader.truncated) return BinError{BinError::Kind::Truncated, "formatVersion"};
    if (header.formatVersion != kFormatVersion)
        return BinError{BinError::Kind::UnsupportedFormatVersion,
                        "version " + std::to_string(header.formatVersion)};
    header.compilerType = reader.string();
    header.compilerVersion = reader.string();
    header.macroCodeLength = reader.u32();
    header.externalVarSize = reader.u32();
    header.localVarSize = reader.u32();
    header.platformTypeCount = reader.u16();
    header.contentChecksum = reader.u32();
    if (reader.truncated) return BinError{BinError::Kind::Truncated, "header fields"};
    return header;
}

} // namespace

uint32_t crc32(std::span<const uint8_t> data) {
    uint32_t crc = 0xFFFFFFFFu;
    for (uint8_t byte : data) crc = (crc >> 8) ^ kCrc.entries[(crc ^ byte) & 0xFF];
    return crc ^ 0xFFFFFFFFu;
}

uint32_t contentChecksum(const CompiledFile &file) {
    std::vector<uint8_t> content = encode(file.code.instructions);
    auto table = tableBytes(file.table);
    if (table) content.insert(content.end(), table->begin(), table->end());
    return crc32(content);
}

Expected<std::vector<uint8_t>, BinError> serialize(const CompiledFile &file) {
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    putU16(out, file.header.formatVersion);
    if (!putString(out, file.header.compilerType) ||
        !putString(out, file.header.compilerVersion))
        return BinError{BinError::Kind::FieldOverflow, "compiler identification string"};
    putU32(out, file.header.macroCodeLength);
    putU32(out, file.header.externalVarSize);
    putU32(out, file.header.localVarSize);
    if (file.table.entries.size() > 0xFFFF)
        return BinError{BinError::Kind::FieldOverflow, "platformTypeCount"};
    putU16(out, file.header.platformTypeCount);
    putU32(out, file.header.contentChecksum);

    std::vector<uint8_t> code = encode(file.code.instructions);
    out.insert(out.end(), code.begin(), code.end());
    auto table = tableBytes(file.table);
    if (!table) return BinError{BinError::Kind::FieldOverflow, "platform field string"};
    out.insert(out.end(), table->begin(), table->end());
    return out;
}

Expected<CompiledFile, BinError> deserialize(std::span<const uint8_t> bytes) {
    Reader reader{bytes};
    auto header = readHeader(reader);
    if (!header.ok()) return header.error();

    CompiledFile file;
    file.header = std::move(header.value());

    std::span<const uint8_t> codeBytes = reader.slice(file.header.macroCodeLength);
    if (reader.truncated) return BinError{BinError::Kind::Truncated, "macro-code section"};

    size_t tableStart = reader.pos;
    for (uint16_t i = 0; i < file.header.platformTypeCount; i++) {
        PlatformEntry entry;
        entry.platform.hardwareType = reader.string();
        entry.platform.hardwareVersion = reader.string();
        entry.platform.osType = reader.string();
        entry.platform.osVersion = reader.string();
        entry.platform.containerVersion = reader.string();
        entry.wcet = reader.u64();
        if (reader.truncated)
            return BinError{BinError::Kind::Truncated,
                            "platform entry " + std::to_string(i)};
        file.table.entries.push_back(std::move(entry));
    }
    if (reader.pos != bytes.size())
        return BinError{BinError::Kind::TrailingBytes,
                        std::to_string(bytes.size() - reader.pos) + " bytes past the table"};

    // Integrity gates decoding: a corrupted code section must surface as a
    // checksum failure, not as a decoder artifact.
    std::vector<uint8_t> content(codeBytes.begin(), codeBytes.end());
    content.insert(content.end(), bytes.begin() + tableStart, bytes.end());
    if (crc32(content) != file.header.contentChecksum)
        return BinError{BinError::Kind::ChecksumMismatch, "content CRC-32 does not match"};

    auto decoded = decode(codeBytes);
    if (!decoded.ok())
        return BinError{BinError::Kind::BadMacroCode,
                        std::string(decodeErrorName(decoded.error().kind)) + " at byte offset " +
                            std::to_string(decoded.error().offset)};
    file.code = std::move(decoded.value());

    std::set<std::string> identities;
    for (const PlatformEntry &entry : file.table.entries) {
        for (const std::string *field :
             {&entry.platform.hardwareType, &entry.platform.hardwareVersion,
              &entry.platform.osType, &entry.platform.osVersion,
              &entry.platform.containerVersion})
            if (field->empty() || field->find('/') != std::string::npos)
                return BinError{BinError::Kind::InconsistentHeader,
                                "platform field empty or contains '/'"};
        if (!identities.insert(entry.platform.identity()).second)
            return BinError{BinError::Kind::InconsistentHeader,
                            "duplicate platform identity " + entry.platform.identity()};
    }
    return file;
}

Expected<Header, BinError> parseHeaderOnly(std::span<const uint8_t> bytes) {
    Reader reader{bytes};
    return readHeader(reader);
}

} // namespace macrocell
