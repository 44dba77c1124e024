#include "macrocell/diag.hpp"

#include <sstream>

namespace macrocell {

const char *diagCodeName(DiagCode code) {
    switch (code) {
    case DiagCode::LexError: return "LexError";
    case DiagCode::ParseError: return "ParseError";
    case DiagCode::UndeclaredIdentifier: return "UndeclaredIdentifier";
    case DiagCode::TypeMismatch: return "TypeMismatch";
    case DiagCode::ConstantIndexOutOfBounds: return "ConstantIndexOutOfBounds";
    case DiagCode::NonLiteralLoopBound: return "NonLiteralLoopBound";
    case DiagCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case DiagCode::LoopVarNotLocalScalar: return "LoopVarNotLocalScalar";
    case DiagCode::LoopVarAssigned: return "LoopVarAssigned";
    case DiagCode::LoopBoundOverflow: return "LoopBoundOverflow";
    case DiagCode::DynamicLocalIndex: return "DynamicLocalIndex";
    case DiagCode::LayoutTooLarge: return "LayoutTooLarge";
    }
    return "UnknownDiag";
}

std::string formatDiagnostic(std::string_view file, const Diagnostic &diag) {
    std::ostringstream out;
    out << file << ':' << diag.loc.line << ':' << diag.loc.column << ": error: " << diag.message
        << " [" << diagCodeName(diag.code) << ']';
    return out.str();
}

} // namespace macrocell
