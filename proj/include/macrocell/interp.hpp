// macrocell/interp.hpp - reference interpreter for macro-code.
//
// Execution is metered by fuel: every step spends the current platform's
// cost for the opcode and traps before the budget would go negative, so any
// instruction stream terminates. All memory effects go through the local
// span and the checked ExternalRegion; nothing outside those two regions is
// ever written.
#pragma once

#include "macrocell/isa.hpp"
#include "macrocell/perfdata.hpp"
#include "macrocell/region.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace macrocell {

enum class Trap {
    DivByZero,
    IndexOutOfBounds,
    RegionViolation,
    StackOverflow,
    FuelExhausted,
};

// Spellings used in execution responses and CLI output.
const char *trapName(Trap trap);

struct VmState {
    uint32_t pc = 0; // byte offset of the next instruction
    std::array<int32_t, kStackDepth> stack{};
    int sp = 0;
    std::span<uint8_t> locals;
    ExternalRegion *external = nullptr;
    uint64_t fuel = 0;
    bool halted = false;
};

struct StepResult {
    std::optional<Trap> trap;
    bool ok() const { return !trap.has_value(); }
};

// Small-step semantics for one instruction. On success pc points at the
// next instruction to execute (nextOffset for straight-line code, the jump
// target otherwise) and fuel has decreased by cost[op]. On a trap the state
// is left as it was at the fault.
StepResult step(VmState &state, const Instruction &instr, uint32_t nextOffset,
                const CostTable &costs);

struct RunResult {
    std::optional<Trap> trap;
    uint64_t fuelConsumed = 0;
    bool ok() const { return !trap.has_value(); }
};

// Runs code until HALT or a trap. `fuel` is the instruction-cost budget
// (request-analysis overhead is charged by the caller). A program counter
// that leaves the code region (jump to a non-instruction offset, or running
// past the end without HALT) traps as RegionViolation.
RunResult run(const MacroCode &code, std::span<uint8_t> locals, ExternalRegion &external,
              const CostTable &costs, uint64_t fuel);

} // namespace macrocell
