#include "macrocell/lexer.hpp"

#include <cctype>
#include <string>
#include <unordered_map>

namespace macrocell {

TokenClass tokenClass(Tok kind) {
    switch (kind) {
    case Tok::KwBool:
    case Tok::KwInt8:
    case Tok::KwInt16:
    case Tok::KwInt32:
    case Tok::KwStruct:
    case Tok::KwLocal:
    case Tok::KwIf:
    case Tok::KwElse:
    case Tok::KwFor:
    case Tok::KwAnd:
    case Tok::KwOr:
        return TokenClass::Keyword;
    case Tok::IntLit:
        return TokenClass::IntegerLiteral;
    case Tok::TrueLit:
    case Tok::FalseLit:
        return TokenClass::BoolLiteral;
    case Tok::Ident:
        return TokenClass::Identifier;
    case Tok::Semi:
    case Tok::Dot:
    case Tok::DotDot:
    case Tok::LParen:
    case Tok::RParen:
    case Tok::LBrace:
    case Tok::RBrace:
    case Tok::LBracket:
    case Tok::RBracket:
        return TokenClass::Punctuation;
    default:
        return TokenClass::Operator;
    }
}

const char *tokName(Tok kind) {
    switch (kind) {
    case Tok::KwBool: return "'bool'";
    case Tok::KwInt8: return "'int8'";
    case Tok::KwInt16: return "'int16'";
    case Tok::KwInt32: return "'int32'";
    case Tok::KwStruct: return "'struct'";
    case Tok::KwLocal: return "'local'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwFor: return "'for'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::IntLit: return "integer literal";
    case Tok::TrueLit: return "'true'";
    case Tok::FalseLit: return "'false'";
    case Tok::Ident: return "identifier";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Assign: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::PlusPlus: return "'++'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Bang: return "'!'";
    }
    return "token";
}

namespace {

const std::unordered_map<std::string_view, Tok> kKeywords = {
    {"bool", Tok::KwBool},     {"int8", Tok::KwInt8},   {"int16", Tok::KwInt16},
    {"int32", Tok::KwInt32},   {"struct", Tok::KwStruct}, {"local", Tok::KwLocal},
    {"if", Tok::KwIf},         {"else", Tok::KwElse},   {"for", Tok::KwFor},
    {"and", Tok::KwAnd},       {"or", Tok::KwOr},       {"true", Tok::TrueLit},
    {"false", Tok::FalseLit},
};

struct Cursor {
    std::string_view src;
    size_t pos = 0;
    int line = 1;
    int column = 1;

    bool done() const { return pos >= src.size(); }
    char peek(size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }
    void advance() {
        if (src[pos] == '\n') {
            line++;
            column = 1;
        } else {
            column++;
        }
        pos++;
    }
};

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentCont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool isDigit(char c) { return c >= '0' && c <= '9'; }

} // namespace

LexResult tokenize(std::string_view source) {
    LexResult result;
    Cursor cur{source};

    while (!cur.done()) {
        char c = cur.peek();

        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            cur.advance();
            continue;
        }
        if (c == '/' && cur.peek(1) == '/') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            continue;
        }

        int line = cur.line;
        int column = cur.column;
        size_t start = cur.pos;
        auto emit = [&](Tok kind) {
            result.tokens.push_back(Token{
                kind, std::string(source.substr(start, cur.pos - start)), line, column});
        };

        if (isIdentStart(c)) {
            while (!cur.done() && isIdentCont(cur.peek())) cur.advance();
            std::string_view text = source.substr(start, cur.pos - start);
            auto it = kKeywords.find(text);
            emit(it != kKeywords.end() ? it->second : Tok::Ident);
            continue;
        }
        if (isDigit(c)) {
            while (!cur.done() && isDigit(cur.peek())) cur.advance();
            emit(Tok::IntLit);
            continue;
        }

        switch (c) {
        case ';': cur.advance(); emit(Tok::Semi); continue;
        case '(': cur.advance(); emit(Tok::LParen); continue;
        case ')': cur.advance(); emit(Tok::RParen); continue;
        case '{': cur.advance(); emit(Tok::LBrace); continue;
        case '}': cur.advance(); emit(Tok::RBrace); continue;
        case '[': cur.advance(); emit(Tok::LBracket); continue;
        case ']': cur.advance(); emit(Tok::RBracket); continue;
        case '*': cur.advance(); emit(Tok::Star); continue;
        case '/': cur.advance(); emit(Tok::Slash); continue;
        case '.':
            cur.advance();
            if (cur.peek() == '.') {
                cur.advance();
                emit(Tok::DotDot);
            } else {
                emit(Tok::Dot);
            }
            continue;
        case '=':
            cur.advance();
            if (cur.peek() == '=') {
                cur.advance();
                emit(Tok::EqEq);
            } else {
                emit(Tok::Assign);
            }
            continue;
        case '!':
            cur.advance();
            if (cur.peek() == '=') {
                cur.advance();
                emit(Tok::NotEq);
            } else {
                emit(Tok::Bang);
            }
            continue;
        case '<':
            cur.advance();
            if (cur.peek() == '=') {
                cur.advance();
                emit(Tok::Le);
            } else {
                emit(Tok::Lt);
            }
            continue;
        case '>':
            cur.advance();
            if (cur.peek() == '=') {
                cur.advance();
                emit(Tok::Ge);
            } else {
                emit(Tok::Gt);
            }
            continue;
        case '+':
            cur.advance();
            if (cur.peek() == '+') {
                cur.advance();
                emit(Tok::PlusPlus);
            } else {
                emit(Tok::Plus);
            }
            continue;
        case '-': cur.advance(); emit(Tok::Minus); continue;
        default:
            result.diags.push_back(Diagnostic{
                DiagCode::LexError,
                SourceLoc{line, column},
                std::string("character '") + c + "' is not part of the language"});
            cur.advance();
            continue;
        }
    }

    return result;
}

} // namespace macrocell
