// macrocell/isa.hpp - the platform-independent macro-code instruction set.
//
// A little stack machine over 32-bit signed values with two byte-addressed
// data regions: local (owned by the container) and external (owned by the
// calling application). Encoded form: 1 opcode byte + 4 little-endian
// two's-complement bytes per operand. The opcode numbering below is part of
// the compiled-file format (see docs/file-format.md) and must not change.
#pragma once

#include "macrocell/expected.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace macrocell {

enum class OpCode : uint8_t {
    PushConst = 0x01,   // a=value          push a
    LoadExt = 0x02,     // a=width b=offset push sign-extended ext[b, b+a)
    StoreExt = 0x03,    // a=width b=offset pop v, write low a bytes at ext[b]
    LoadLoc = 0x04,     // a=width b=offset push sign-extended loc[b, b+a)
    StoreLoc = 0x05,    // a=width b=offset pop v, write low a bytes at loc[b]
    LoadExtDyn = 0x06,  // a=width          pop offset, push ext[offset, offset+a)
    StoreExtDyn = 0x07, // a=width          pop offset, pop v, write at ext[offset]
    Add = 0x08,         // pop b, pop a, push a+b (32-bit wraparound)
    Sub = 0x09,
    Mul = 0x0A,
    Neg = 0x0B,
    Div = 0x0C,         // truncation toward zero; divisor 0 traps; INT_MIN/-1 wraps
    And = 0x0D,         // logical: nonzero operands are true, result 0/1
    Or = 0x0E,
    Not = 0x0F,
    CmpEq = 0x10,       // pop b, pop a, push (a op b) ? 1 : 0, signed
    CmpNe = 0x11,
    CmpLt = 0x12,
    CmpLe = 0x13,
    CmpGt = 0x14,
    CmpGe = 0x15,
    Jump = 0x16,        // a=target byte offset (an instruction start)
    JumpIfFalse = 0x17, // a=target          pop c, jump when c == 0
    BoundsCheck = 0x18, // a=lo b=hi         pop i, trap unless lo<=i<=hi, push i
    Halt = 0x19,        // stop, status OK
};

inline constexpr size_t kOpCount = 25;
inline constexpr int kStackDepth = 64; // fixed operand stack, entries of 4 bytes
inline constexpr uint32_t kStackBytes = kStackDepth * 4;

struct OpInfo {
    OpCode op;
    const char *mnemonic; // spelling used in perf-data files and disassembly
    int operandCount;     // 0, 1 or 2
};

const std::array<OpInfo, kOpCount> &opTable();
const OpInfo *opInfo(uint8_t byte);                   // null for unknown bytes
const OpInfo &opInfo(OpCode op);
const OpInfo *opInfoByMnemonic(std::string_view name); // null for unknown names

struct Instruction {
    OpCode op;
    int32_t a = 0;
    int32_t b = 0;
    bool operator==(const Instruction &) const = default;
};

uint32_t encodedLength(const Instruction &instr); // 1 + 4 * operandCount

struct MacroCode {
    std::vector<Instruction> instructions;
    uint32_t byteLength = 0;
    bool operator==(const MacroCode &) const = default;
};

MacroCode makeMacroCode(std::vector<Instruction> instructions);

std::vector<uint8_t> encode(std::span<const Instruction> instructions);

struct DecodeError {
    enum Kind { TruncatedInstruction, UnknownOpcode, MisalignedJumpTarget } kind;
    uint32_t offset; // byte offset of the offending instruction or target
};

const char *decodeErrorName(DecodeError::Kind kind);

// Inverse of encode. Rejects trailing bytes, unknown opcodes and jump
// targets that are not instruction-start offsets.
Expected<MacroCode, DecodeError> decode(std::span<const uint8_t> bytes);

} // namespace macrocell
