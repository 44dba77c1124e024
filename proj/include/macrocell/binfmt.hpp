// macrocell/binfmt.hpp - serialization of compiled files.
//
// Layout, all integers little-endian, strings u16-length-prefixed UTF-8:
//
//   magic            4 bytes  "MCF\0"
//   formatVersion    u16
//   compilerType     string
//   compilerVersion  string
//   macroCodeLength  u32      byte length of the macro-code section
//   externalVarSize  u32
//   localVarSize     u32
//   platformTypeCount u16
//   contentChecksum  u32      CRC-32 over macro-code + platform table bytes
//   macro-code       macroCodeLength bytes
//   platform table   platformTypeCount entries:
//       hardwareType string, hardwareVersion string, osType string,
//       osVersion string, containerVersion string, wcet u64
//
// Deserialization verifies the checksum before decoding the macro-code,
// so a bit flip inside the code section reports ChecksumMismatch rather
// than a decode error.
#pragma once

#include "macrocell/compiled_file.hpp"
#include "macrocell/expected.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace macrocell {

struct BinError {
    enum class Kind {
        Truncated,                // input ends mid-field
        BadMagic,                 // first four bytes are not "MCF\0"
        UnsupportedFormatVersion, // version != kFormatVersion
        ChecksumMismatch,         // stored CRC != computed CRC
        BadMacroCode,             // macro-code section fails to decode
        InconsistentHeader,       // header contradicts itself or the body
        FieldOverflow,            // a count or length exceeds its field
        TrailingBytes,            // input continues past the platform table
    };
    Kind kind;
    std::string detail;
};

const char *binErrorName(BinError::Kind kind);

// CRC-32, reflected, polynomial 0xEDB88320, init/final xor 0xFFFFFFFF.
uint32_t crc32(std::span<const uint8_t> data);

// The header's contentChecksum: CRC-32 over the encoded macro-code bytes
// followed by the serialized platform table bytes.
uint32_t contentChecksum(const CompiledFile &file);

// Serializes a file whose header is already consistent (assembleCompiledFile
// guarantees this). Fails only when a string or count does not fit its field.
Expected<std::vector<uint8_t>, BinError> serialize(const CompiledFile &file);

// Full parse: header, checksum verification, macro-code decode, table.
Expected<CompiledFile, BinError> deserialize(std::span<const uint8_t> bytes);

// Header fields only; does not touch the body past the fixed header. Used
// by inspection paths that must not pay for code decode.
Expected<Header, BinError> parseHeaderOnly(std::span<const uint8_t> bytes);

} // namespace macrocell
