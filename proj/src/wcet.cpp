#include "macrocell/wcet.hpp"

#include <limits>

namespace macrocell {

namespace {

constexpr uint64_t kMax = std::numeric_limits<uint64_t>::max();

struct Overflowed {};

uint64_t checkedAdd(uint64_t a, uint64_t b) {
    if (a > kMax - b) throw Overflowed{};
    return a + b;
}

uint64_t checkedMul(uint64_t a, uint64_t b) {
    if (b != 0 && a > kMax / b) throw Overflowed{};
    return a * b;
}

struct Walker {
    const MacroCode &code;
    const PerfData &perf;

    uint64_t instructionCost(const Instruction &instr) {
        uint64_t cost = perf.costOf(instr.op);
        if (cost == 0) {
            // Validated perf data always carries every opcode; reaching
            // this means the caller bypassed validation.
            throw WcetError{WcetError::MissingOpcode, opInfo(instr.op).mnemonic};
        }
        return cost;
    }

    uint64_t walk(const WcetShape *shape) {
        if (!shape) return 0;
        switch (shape->kind) {
        case WcetShape::Kind::Range: {
            uint64_t total = 0;
            for (uint32_t i = shape->begin; i < shape->end; i++)
                total = checkedAdd(total, instructionCost(code.instructions[i]));
            return total;
        }
        case WcetShape::Kind::Seq: {
            uint64_t total = 0;
            for (const auto &child : shape->children)
                total = checkedAdd(total, walk(child.get()));
            return total;
        }
        case WcetShape::Kind::Branch: {
            uint64_t cond = walk(shape->cond.get());
            uint64_t thenCost = walk(shape->thenArm.get());
            uint64_t elseCost = walk(shape->elseArm.get());
            return checkedAdd(cond, std::max(thenCost, elseCost));
        }
        case WcetShape::Kind::Loop: {
            uint64_t test = walk(shape->test.get());
            uint64_t once = checkedAdd(test, checkedAdd(walk(shape->body.get()),
                                                        walk(shape->incr.get())));
            uint64_t iterations = checkedMul(shape->tripCount, once);
            return checkedAdd(walk(shape->init.get()), checkedAdd(iterations, test));
        }
        }
        return 0;
    }
};

} // namespace

Expected<uint64_t, WcetError> computeWcet(const MacroCode &code, const StructureMap &map,
                                          const PerfData &perf) {
    try {
        Walker walker{code, perf};
        uint64_t body = walker.walk(map.root.get());
        return checkedAdd(perf.requestOverhead, body);
    } catch (Overflowed &) {
        return WcetError{WcetError::Overflow, "worst-case time exceeds 64 bits"};
    } catch (WcetError &err) {
        return err;
    }
}

} // namespace macrocell
