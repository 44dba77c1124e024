// macrocell/lexer.hpp - lexer for the adaptation language.
#pragma once

#include "macrocell/diag.hpp"
#include "macrocell/token.hpp"

#include <string_view>
#include <vector>

namespace macrocell {

struct LexResult {
    std::vector<Token> tokens; // no end-of-input sentinel
    std::vector<Diagnostic> diags;
    bool ok() const { return diags.empty(); }
};

// Splits source text into tokens. `//` line comments and whitespace are
// skipped. Any character outside the language alphabet (notably `&`, `|`,
// `%`, string quotes) is a LexError.
LexResult tokenize(std::string_view source);

} // namespace macrocell
