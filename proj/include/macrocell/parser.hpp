// macrocell/parser.hpp - recursive descent parser for the adaptation language.
#pragma once

#include "macrocell/ast.hpp"
#include "macrocell/lexer.hpp"

#include <optional>

namespace macrocell {

struct ParseResult {
    std::optional<Ast> ast;
    std::vector<Diagnostic> diags;
    bool ok() const { return ast.has_value() && diags.empty(); }
};

// Grammar:
//   program    := extDecl* localDecl* stmt*
//   extDecl    := typeSpec declarator ';'
//   localDecl  := 'local' typeSpec declarator ';'
//   typeSpec   := 'bool' | 'int8' | 'int16' | 'int32'
//               | 'struct' '{' (scalarType ident ';')* '}'
//   declarator := ident ('[' bound '..' bound ']')?
//   stmt       := assign | if | for | block
//   assign     := lvalue '=' expr ';'
//   if         := 'if' '(' expr ')' stmt ('else' stmt)?
//   for        := 'for' '(' ident '=' expr ';' ident '<=' expr ';' ident '++' ')' stmt
//   block      := '{' stmt* '}'
//   lvalue     := ident ('[' expr ']')? ('.' ident)?
// Expressions use C-like precedence: or < and < comparison < add < mul < unary.
// Logical operators are spelled `and`, `or`, `!`; there is no `&` or `|`.
// Pointer declarators and address-of are not part of the grammar.
ParseResult parse(const std::vector<Token> &tokens);

// Convenience: tokenize + parse.
ParseResult parseSource(std::string_view source);

} // namespace macrocell
