#include "macrocell/interp.hpp"

#include <limits>
#include <unordered_map>

namespace macrocell {

const char *trapName(Trap trap) {
    switch (trap) {
    case Trap::DivByZero: return "DIV_BY_ZERO";
    case Trap::IndexOutOfBounds: return "INDEX_OUT_OF_BOUNDS";
    case Trap::RegionViolation: return "REGION_VIOLATION";
    case Trap::StackOverflow: return "STACK_OVERFLOW";
    case Trap::FuelExhausted: return "FUEL_EXHAUSTED";
    }
    return "?";
}

namespace {

int32_t signExtend(uint32_t raw, uint32_t width) {
    switch (width) {
    case 1: return static_cast<int8_t>(raw);
    case 2: return static_cast<int16_t>(raw);
    default: return static_cast<int32_t>(raw);
    }
}

bool localsInRange(std::span<const uint8_t> locals, int64_t offset, uint32_t width) {
    return (width == 1 || width == 2 || width == 4) && offset >= 0 &&
           uint64_t(offset) + width <= locals.size();
}

uint32_t localsLoad(std::span<const uint8_t> locals, int64_t offset, uint32_t width) {
    uint32_t value = 0;
    for (uint32_t i = 0; i < width; i++) value |= uint32_t(locals[size_t(offset) + i]) << (8 * i);
    return value;
}

void localsStore(std::span<uint8_t> locals, int64_t offset, uint32_t width, uint32_t value) {
    for (uint32_t i = 0; i < width; i++)
        locals[size_t(offset) + i] = static_cast<uint8_t>(value >> (8 * i));
}

int32_t wrapAdd(int32_t a, int32_t b) {
    return static_cast<int32_t>(uint32_t(a) + uint32_t(b));
}
int32_t wrapSub(int32_t a, int32_t b) {
    return static_cast<int32_t>(uint32_t(a) - uint32_t(b));
}
int32_t wrapMul(int32_t a, int32_t b) {
    return static_cast<int32_t>(uint32_t(a) * uint32_t(b));
}

} // namespace

// Traps leave the whole state untouched: operands are read without popping
// and all writes happen after every check has passed. Fuel is spent only by
// instructions that complete.
StepResult step(VmState &state, const Instruction &instr, uint32_t nextOffset,
                const CostTable &costs) {
    const OpInfo &info = opInfo(instr.op);
    uint64_t cost = costs[static_cast<uint8_t>(instr.op) - 1];
    if (state.fuel < cost) return StepResult{Trap::FuelExhausted};

    // Stack operands, top last. peeked values; sp moves only on success.
    auto peek = [&](int depth) { return state.stack[size_t(state.sp - depth)]; };

    int pops = 0;
    int pushes = 0;
    switch (instr.op) {
    case OpCode::PushConst: pushes = 1; break;
    case OpCode::LoadExt:
    case OpCode::LoadLoc: pushes = 1; break;
    case OpCode::StoreExt:
    case OpCode::StoreLoc: pops = 1; break;
    case OpCode::LoadExtDyn: pops = 1; pushes = 1; break;
    case OpCode::StoreExtDyn: pops = 2; break;
    case OpCode::Add:
    case OpCode::Sub:
    case OpCode::Mul:
    case OpCode::Div:
    case OpCode::And:
    case OpCode::Or:
    case OpCode::CmpEq:
    case OpCode::CmpNe:
    case OpCode::CmpLt:
    case OpCode::CmpLe:
    case OpCode::CmpGt:
    case OpCode::CmpGe: pops = 2; pushes = 1; break;
    case OpCode::Neg:
    case OpCode::Not: pops = 1; pushes = 1; break;
    case OpCode::Jump: break;
    case OpCode::JumpIfFalse: pops = 1; break;
    case OpCode::BoundsCheck: pops = 1; pushes = 1; break;
    case OpCode::Halt: break;
    }
    (void)info;

    if (state.sp < pops) return StepResult{Trap::StackOverflow};
    if (state.sp - pops + pushes > kStackDepth) return StepResult{Trap::StackOverflow};

    uint32_t newPc = nextOffset;
    bool halted = false;
    int32_t result = 0;
    bool hasResult = pushes == 1;

    switch (instr.op) {
    case OpCode::PushConst:
        result = instr.a;
        break;
    case OpCode::LoadExt: {
        uint32_t raw = 0;
        if (!state.external->load(instr.b, uint32_t(instr.a), raw))
            return StepResult{Trap::RegionViolation};
        result = signExtend(raw, uint32_t(instr.a));
        break;
    }
    case OpCode::StoreExt:
        if (!state.external->store(instr.b, uint32_t(instr.a), uint32_t(peek(1))))
            return StepResult{Trap::RegionViolation};
        break;
    case OpCode::LoadLoc: {
        if (!localsInRange(state.locals, instr.b, uint32_t(instr.a)))
            return StepResult{Trap::RegionViolation};
        result = signExtend(localsLoad(state.locals, instr.b, uint32_t(instr.a)),
                            uint32_t(instr.a));
        break;
    }
    case OpCode::StoreLoc:
        if (!localsInRange(state.locals, instr.b, uint32_t(instr.a)))
            return StepResult{Trap::RegionViolation};
        localsStore(state.locals, instr.b, uint32_t(instr.a), uint32_t(peek(1)));
        break;
    case OpCode::LoadExtDyn: {
        uint32_t raw = 0;
        if (!state.external->load(peek(1), uint32_t(instr.a), raw))
            return StepResult{Trap::RegionViolation};
        result = signExtend(raw, uint32_t(instr.a));
        break;
    }
    case OpCode::StoreExtDyn:
        // Value is pushed first, the offset on top of it.
        if (!state.external->store(peek(1), uint32_t(instr.a), uint32_t(peek(2))))
            return StepResult{Trap::RegionViolation};
        break;
    case OpCode::Add: result = wrapAdd(peek(2), peek(1)); break;
    case OpCode::Sub: result = wrapSub(peek(2), peek(1)); break;
    case OpCode::Mul: result = wrapMul(peek(2), peek(1)); break;
    case OpCode::Neg: result = wrapSub(0, peek(1)); break;
    case OpCode::Div: {
        int32_t a = peek(2);
        int32_t b = peek(1);
        if (b == 0) return StepResult{Trap::DivByZero};
        if (a == std::numeric_limits<int32_t>::min() && b == -1)
            result = a;
        else
            result = a / b;
        break;
    }
    case OpCode::And: result = (peek(2) != 0 && peek(1) != 0) ? 1 : 0; break;
    case OpCode::Or: result = (peek(2) != 0 || peek(1) != 0) ? 1 : 0; break;
    case OpCode::Not: result = peek(1) == 0 ? 1 : 0; break;
    case OpCode::CmpEq: result = peek(2) == peek(1) ? 1 : 0; break;
    case OpCode::CmpNe: result = peek(2) != peek(1) ? 1 : 0; break;
    case OpCode::CmpLt: result = peek(2) < peek(1) ? 1 : 0; break;
    case OpCode::CmpLe: result = peek(2) <= peek(1) ? 1 : 0; break;
    case OpCode::CmpGt: result = peek(2) > peek(1) ? 1 : 0; break;
    case OpCode::CmpGe: result = peek(2) >= peek(1) ? 1 : 0; break;
    case OpCode::Jump:
        newPc = static_cast<uint32_t>(instr.a);
        break;
    case OpCode::JumpIfFalse:
        if (peek(1) == 0) newPc = static_cast<uint32_t>(instr.a);
        break;
    case OpCode::BoundsCheck: {
        int32_t index = peek(1);
        if (index < instr.a || index > instr.b) return StepResult{Trap::IndexOutOfBounds};
        result = index;
        break;
    }
    case OpCode::Halt:
        halted = true;
        break;
    }

    state.sp -= pops;
    if (hasResult) state.stack[size_t(state.sp++)] = result;
    state.fuel -= cost;
    state.pc = newPc;
    state.halted = halted;
    return StepResult{};
}

RunResult run(const MacroCode &code, std::span<uint8_t> locals, ExternalRegion &external,
              const CostTable &costs, uint64_t fuel) {
    // Instruction starts, for pc validation and fetch.
    std::unordered_map<uint32_t, size_t> starts;
    starts.reserve(code.instructions.size());
    uint32_t offset = 0;
    for (size_t i = 0; i < code.instructions.size(); i++) {
        starts.emplace(offset, i);
        offset += encodedLength(code.instructions[i]);
    }

    VmState state;
    state.locals = locals;
    state.external = &external;
    state.fuel = fuel;

    RunResult result;
    while (!state.halted) {
        auto it = starts.find(state.pc);
        if (it == starts.end()) {
            result.trap = Trap::RegionViolation;
            break;
        }
        const Instruction &instr = code.instructions[it->second];
        StepResult stepped = step(state, instr, state.pc + encodedLength(instr), costs);
        if (!stepped.ok()) {
            result.trap = stepped.trap;
            break;
        }
    }
    result.fuelConsumed = fuel - state.fuel;
    return result;
}

} // namespace macrocell
