// macrocell/token.hpp - token definitions for the adaptation language.
#pragma once

#include <string>
#include <string_view>

namespace macrocell {

enum class Tok {
    // keywords
    KwBool,
    KwInt8,
    KwInt16,
    KwInt32,
    KwStruct,
    KwLocal,
    KwIf,
    KwElse,
    KwFor,
    KwAnd,
    KwOr,
    // literals
    IntLit,
    TrueLit,
    FalseLit,
    // names
    Ident,
    // punctuation
    Semi,
    Dot,
    DotDot,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    // operators
    Assign,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    PlusPlus,
    Minus,
    Star,
    Slash,
    Bang,
};

// Coarse classification used by diagnostics and external descriptions.
enum class TokenClass {
    Keyword,
    Identifier,
    IntegerLiteral,
    BoolLiteral,
    Punctuation,
    Operator,
};

TokenClass tokenClass(Tok kind);
const char *tokName(Tok kind);

struct Token {
    Tok kind;
    std::string lexeme;
    int line;   // 1-based, first character of the lexeme
    int column; // 1-based
};

} // namespace macrocell
