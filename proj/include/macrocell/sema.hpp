// macrocell/sema.hpp - semantic analysis: name resolution, type checking,
// array bound checking and loop trip counting.
#pragma once

#include "macrocell/ast.hpp"
#include "macrocell/parser.hpp"

#include <optional>
#include <unordered_map>

namespace macrocell {

// An analyzed program. The embedded Ast carries resolved annotations:
// every VarRefExpr has resolvedDecl / indexMode / leafType filled in and
// every ForStmt has a finite tripCount >= 0.
struct TypedProgram {
    Ast ast;
    std::unordered_map<std::string, int> symbols; // name -> index into ast.decls

    const VarDecl &decl(int index) const { return ast.decls[size_t(index)]; }
};

struct AnalyzeResult {
    std::optional<TypedProgram> program;
    std::vector<Diagnostic> diags;
    bool ok() const { return program.has_value() && diags.empty(); }
};

// Checks, in one pass over the declarations and statements:
//  - names declared exactly once (DuplicateDeclaration, UndeclaredIdentifier)
//  - expressions well typed: conditions bool, arithmetic int-only (TypeMismatch)
//  - constant array indices within declared bounds (ConstantIndexOutOfBounds);
//    dynamic indices flagged for a runtime bounds check. Dynamic indices into
//    local arrays are rejected (DynamicLocalIndex): the instruction set
//    addresses the external region dynamically, not the local one.
//  - for loops: literal bounds (NonLiteralLoopBound), loop variable a local
//    integer scalar (LoopVarNotLocalScalar), bounds and end+1 representable in
//    the variable's width (LoopBoundOverflow), no assignment to an active loop
//    variable (LoopVarAssigned); trip count = max(0, end - start + 1)
//  - packed variable regions each fit in 2^31 - 1 bytes (LayoutTooLarge)
AnalyzeResult analyze(Ast ast);

// Convenience: tokenize + parse + analyze.
AnalyzeResult analyzeSource(std::string_view source);

} // namespace macrocell
