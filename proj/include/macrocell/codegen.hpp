// macrocell/codegen.hpp - macro-code generation and the structure map
// consumed by the WCET analysis.
#pragma once

#include "macrocell/expected.hpp"
#include "macrocell/isa.hpp"
#include "macrocell/layout.hpp"
#include "macrocell/sema.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace macrocell {

// Links the structured program to instruction ranges. Ranges are half-open
// instruction index intervals [begin, end). Branch nodes keep the
// conditional jump inside the condition range and the jump over the else
// arm inside the then range, so each node's worst case is the exact maximum
// over its paths. Loop nodes carry the compile-time trip count; the test
// range runs tripCount + 1 times (the final run fails and exits).
struct WcetShape {
    enum class Kind { Range, Seq, Branch, Loop };
    Kind kind = Kind::Range;

    uint32_t begin = 0, end = 0; // Range

    std::vector<std::unique_ptr<WcetShape>> children; // Seq

    std::unique_ptr<WcetShape> cond, thenArm, elseArm; // Branch (elseArm may be null)

    std::unique_ptr<WcetShape> init, test, body, incr; // Loop
    uint64_t tripCount = 0;
};

struct StructureMap {
    std::unique_ptr<WcetShape> root;
};

struct CodegenResult {
    MacroCode code;
    StructureMap map;
};

struct CodegenError {
    enum Kind { JumpOutOfRange, ExpressionTooDeep } kind;
    std::string detail;
};

// Compiles an analyzed program against its layout. Every dynamic array
// access is preceded by BOUNDS_CHECK with the declared bounds; constant
// indices are folded into static offsets. Loads of bool variables are
// canonicalized to 0/1 (NOT NOT), so any nonzero stored byte reads as true.
// Programs whose expressions need more than the fixed operand stack are
// rejected rather than compiled into code that could trap.
Expected<CodegenResult, CodegenError> generateCode(const TypedProgram &program,
                                                   const VariableLayout &layout);

// One instruction per line: "0012: STORE_EXT 1 0" (hex byte offset).
std::string disassemble(const MacroCode &code);

} // namespace macrocell
