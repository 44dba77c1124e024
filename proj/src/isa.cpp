#include "macrocell/isa.hpp"

#include <set>

namespace macrocell {

namespace {

const std::array<OpInfo, kOpCount> kOps = {{
    {OpCode::PushConst, "PUSH_CONST", 1},
    {OpCode::LoadExt, "LOAD_EXT", 2},
    {OpCode::StoreExt, "STORE_EXT", 2},
    {OpCode::LoadLoc, "LOAD_LOC", 2},
    {OpCode::StoreLoc, "STORE_LOC", 2},
    {OpCode::LoadExtDyn, "LOAD_EXT_DYN", 1},
    {OpCode::StoreExtDyn, "STORE_EXT_DYN", 1},
    {OpCode::Add, "ADD", 0},
    {OpCode::Sub, "SUB", 0},
    {OpCode::Mul, "MUL", 0},
    {OpCode::Neg, "NEG", 0},
    {OpCode::Div, "DIV", 0},
    {OpCode::And, "AND", 0},
    {OpCode::Or, "OR", 0},
    {OpCode::Not, "NOT", 0},
    {OpCode::CmpEq, "CMP_EQ", 0},
    {OpCode::CmpNe, "CMP_NE", 0},
    {OpCode::CmpLt, "CMP_LT", 0},
    {OpCode::CmpLe, "CMP_LE", 0},
    {OpCode::CmpGt, "CMP_GT", 0},
    {OpCode::CmpGe, "CMP_GE", 0},
    {OpCode::Jump, "JUMP", 1},
    {OpCode::JumpIfFalse, "JUMP_IF_FALSE", 1},
    {OpCode::BoundsCheck, "BOUNDS_CHECK", 2},
    {OpCode::Halt, "HALT", 0},
}};

void appendWord(std::vector<uint8_t> &out, int32_t value) {
    uint32_t u = static_cast<uint32_t>(value);
    out.push_back(static_cast<uint8_t>(u));
    out.push_back(static_cast<uint8_t>(u >> 8));
    out.push_back(static_cast<uint8_t>(u >> 16));
    out.push_back(static_cast<uint8_t>(u >> 24));
}

int32_t readWord(std::span<const uint8_t> bytes, size_t at) {
    uint32_t u = uint32_t(bytes[at]) | uint32_t(bytes[at + 1]) << 8 |
                 uint32_t(bytes[at + 2]) << 16 | uint32_t(bytes[at + 3]) << 24;
    return static_cast<int32_t>(u);
}

} // namespace

const std::array<OpInfo, kOpCount> &opTable() { return kOps; }

const OpInfo *opInfo(uint8_t byte) {
    // Opcodes are contiguous, 0x01 through 0x19.
    if (byte < 0x01 || byte > 0x19) return nullptr;
    return &kOps[byte - 0x01];
}

const OpInfo &opInfo(OpCode op) { return *opInfo(static_cast<uint8_t>(op)); }

const OpInfo *opInfoByMnemonic(std::string_view name) {
    for (const OpInfo &info : kOps)
        if (name == info.mnemonic) return &info;
    return nullptr;
}

uint32_t encodedLength(const Instruction &instr) {
    return 1 + 4 * static_cast<uint32_t>(opInfo(instr.op).operandCount);
}

MacroCode makeMacroCode(std::vector<Instruction> instructions) {
    MacroCode code;
    for (const Instruction &instr : instructions) code.byteLength += encodedLength(instr);
    code.instructions = std::move(instructions);
    return code;
}

std::vector<uint8_t> encode(std::span<const Instruction> instructions) {
    std::vector<uint8_t> out;
    for (const Instruction &instr : instructions) {
        const OpInfo &info = opInfo(instr.op);
        out.push_back(static_cast<uint8_t>(instr.op));
        if (info.operandCount >= 1) appendWord(out, instr.a);
        if (info.operandCount >= 2) appendWord(out, instr.b);
    }
    return out;
}

const char *decodeErrorName(DecodeError::Kind kind) {
    switch (kind) {
    case DecodeError::TruncatedInstruction: return "TruncatedInstruction";
    case DecodeError::UnknownOpcode: return "UnknownOpcode";
    case DecodeError::MisalignedJumpTarget: return "MisalignedJumpTarget";
    }
    return "?";
}

Expected<MacroCode, DecodeError> decode(std::span<const uint8_t> bytes) {
    MacroCode code;
    std::set<uint32_t> starts;
    std::vector<std::pair<uint32_t, int32_t>> jumpTargets; // instr offset, target

    size_t pos = 0;
    while (pos < bytes.size()) {
        uint32_t offset = static_cast<uint32_t>(pos);
        const OpInfo *info = opInfo(bytes[pos]);
        if (!info) return DecodeError{DecodeError::UnknownOpcode, offset};
        size_t length = 1 + 4 * size_t(info->operandCount);
        if (pos + length > bytes.size())
            return DecodeError{DecodeError::TruncatedInstruction, offset};

        Instruction instr;
        instr.op = info->op;
        if (info->operandCount >= 1) instr.a = readWord(bytes, pos + 1);
        if (info->operandCount >= 2) instr.b = readWord(bytes, pos + 5);

        if (instr.op == OpCode::Jump || instr.op == OpCode::JumpIfFalse)
            jumpTargets.emplace_back(offset, instr.a);

        starts.insert(offset);
        code.instructions.push_back(instr);
        pos += length;
    }
    code.byteLength = static_cast<uint32_t>(pos);

    for (auto [offset, target] : jumpTargets)
        if (target < 0 || !starts.count(static_cast<uint32_t>(target)))
            return DecodeError{DecodeError::MisalignedJumpTarget, offset};

    return code;
}

} // namespace macrocell
