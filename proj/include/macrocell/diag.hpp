// macrocell/diag.hpp - diagnostic codes and source locations for the front-end.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace macrocell {

struct SourceLoc {
    int line = 0;   // 1-based
    int column = 0; // 1-based
};

enum class DiagCode {
    LexError,
    ParseError,
    UndeclaredIdentifier,
    TypeMismatch,
    ConstantIndexOutOfBounds,
    NonLiteralLoopBound,
    DuplicateDeclaration,
    LoopVarNotLocalScalar,
    LoopVarAssigned,
    LoopBoundOverflow,
    DynamicLocalIndex,
    LayoutTooLarge,
};

const char *diagCodeName(DiagCode code);

struct Diagnostic {
    DiagCode code;
    SourceLoc loc;
    std::string message;
};

// "file:line:col: error: message [Code]"
std::string formatDiagnostic(std::string_view file, const Diagnostic &diag);

} // namespace macrocell
