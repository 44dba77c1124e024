#include "macrocell/parser.hpp"

#include <cstdlib>
#include <limits>

namespace macrocell {

namespace {

constexpr int kMaxExprDepth = 200;

// Thrown internally to unwind on the first parse error; callers see it as
// a diagnostic in ParseResult, never as an exception.
struct ParseAbort {};

class Parser {
  public:
    explicit Parser(const std::vector<Token> &tokens) : tokens_(tokens) {}

    ParseResult run() {
        ParseResult result;
        try {
            Ast ast = parseProgram();
            result.ast = std::move(ast);
        } catch (ParseAbort &) {
            result.diags.push_back(std::move(diag_));
        }
        return result;
    }

  private:
    const std::vector<Token> &tokens_;
    size_t pos_ = 0;
    int exprDepth_ = 0;
    Diagnostic diag_;

    bool done() const { return pos_ >= tokens_.size(); }
    const Token &peek() const { return tokens_[pos_]; }
    bool at(Tok kind) const { return !done() && peek().kind == kind; }

    SourceLoc here() const {
        if (done()) {
            if (tokens_.empty()) return SourceLoc{1, 1};
            const Token &last = tokens_.back();
            return SourceLoc{last.line, last.column + static_cast<int>(last.lexeme.size())};
        }
        return SourceLoc{peek().line, peek().column};
    }

    [[noreturn]] void fail(std::string message) {
        diag_ = Diagnostic{DiagCode::ParseError, here(), std::move(message)};
        throw ParseAbort{};
    }

    std::string found() const {
        return done() ? std::string("end of input")
                      : std::string(tokName(peek().kind));
    }

    const Token &expect(Tok kind) {
        if (!at(kind)) fail(std::string("expected ") + tokName(kind) + ", found " + found());
        return tokens_[pos_++];
    }

    bool accept(Tok kind) {
        if (!at(kind)) return false;
        pos_++;
        return true;
    }

    // ------------------------------------------------------------------
    // Program structure
    // ------------------------------------------------------------------

    Ast parseProgram() {
        Ast ast;
        while (!done() && isTypeStart(peek().kind))
            parseDecl(ast, /*isLocal=*/false);
        while (!done() && at(Tok::KwLocal)) {
            pos_++;
            if (done() || !isTypeStart(peek().kind))
                fail(std::string("expected a type after 'local', found ") + found());
            parseDecl(ast, /*isLocal=*/true);
        }
        while (!done()) {
            if (isTypeStart(peek().kind) || at(Tok::KwLocal))
                fail("declarations must precede statements");
            ast.stmts.push_back(parseStmt());
        }
        return ast;
    }

    static bool isTypeStart(Tok kind) {
        return kind == Tok::KwBool || kind == Tok::KwInt8 || kind == Tok::KwInt16 ||
               kind == Tok::KwInt32 || kind == Tok::KwStruct;
    }

    ScalarKind parseScalarType() {
        if (accept(Tok::KwBool)) return ScalarKind::Bool;
        if (accept(Tok::KwInt8)) return ScalarKind::Int8;
        if (accept(Tok::KwInt16)) return ScalarKind::Int16;
        if (accept(Tok::KwInt32)) return ScalarKind::Int32;
        fail(std::string("expected a scalar type, found ") + found());
    }

    void parseDecl(Ast &ast, bool isLocal) {
        SourceLoc loc = here();
        VarType type;
        if (at(Tok::KwStruct)) {
            pos_++;
            expect(Tok::LBrace);
            StructType st;
            while (!at(Tok::RBrace)) {
                if (done()) fail("expected '}' to close the struct, found end of input");
                StructField field;
                field.type = parseScalarType();
                field.name = expect(Tok::Ident).lexeme;
                expect(Tok::Semi);
                st.fields.push_back(std::move(field));
            }
            expect(Tok::RBrace);
            if (st.fields.empty()) fail("a struct needs at least one field");
            type.elem = std::move(st);
        } else {
            type.elem = parseScalarType();
        }

        if (at(Tok::Star)) fail("pointer declarators are not part of the language");
        std::string name = expect(Tok::Ident).lexeme;

        if (accept(Tok::LBracket)) {
            type.isArray = true;
            type.lo = parseBoundLiteral();
            expect(Tok::DotDot);
            type.hi = parseBoundLiteral();
            expect(Tok::RBracket);
            if (type.lo > type.hi) fail("array bounds must satisfy lo <= hi");
        }
        expect(Tok::Semi);

        VarDecl decl;
        decl.name = std::move(name);
        decl.isLocal = isLocal;
        decl.type = std::move(type);
        decl.declOrder = static_cast<int>(ast.decls.size());
        decl.loc = loc;
        ast.decls.push_back(std::move(decl));
    }

    int32_t parseBoundLiteral() {
        bool negative = accept(Tok::Minus);
        const Token &tok = expect(Tok::IntLit);
        int64_t value = literalValue(tok);
        if (negative) value = -value;
        if (value < std::numeric_limits<int32_t>::min() ||
            value > std::numeric_limits<int32_t>::max())
            fail("array bound does not fit in 32 bits");
        return static_cast<int32_t>(value);
    }

    int64_t literalValue(const Token &tok) {
        // Lexeme is all digits; clamp past 2^31 so overflow checks stay exact.
        int64_t value = 0;
        for (char c : tok.lexeme) {
            value = value * 10 + (c - '0');
            if (value > int64_t(1) << 32) break;
        }
        return value;
    }

    // ------------------------------------------------------------------
    // Statements
    // ------------------------------------------------------------------

    StmtPtr parseStmt() {
        if (done()) fail("expected a statement, found end of input");
        SourceLoc loc = here();
        if (at(Tok::LBrace)) return parseBlock();
        if (at(Tok::KwIf)) return parseIf();
        if (at(Tok::KwFor)) return parseFor();
        if (at(Tok::Ident)) {
            AssignStmt assign;
            assign.targetLoc = loc;
            assign.target = parseVarRefParts();
            expect(Tok::Assign);
            assign.value = parseExpr();
            expect(Tok::Semi);
            auto stmt = std::make_unique<Stmt>();
            stmt->node = std::move(assign);
            stmt->loc = loc;
            return stmt;
        }
        fail(std::string("expected a statement, found ") + found());
    }

    StmtPtr parseBlock() {
        SourceLoc loc = here();
        expect(Tok::LBrace);
        BlockStmt block;
        while (!at(Tok::RBrace)) {
            if (done()) fail("expected '}' to close the block, found end of input");
            block.stmts.push_back(parseStmt());
        }
        expect(Tok::RBrace);
        auto stmt = std::make_unique<Stmt>();
        stmt->node = std::move(block);
        stmt->loc = loc;
        return stmt;
    }

    // Bodies are normalized to blocks so downstream passes see one shape.
    StmtPtr parseBody() {
        SourceLoc loc = here();
        StmtPtr inner = parseStmt();
        if (std::holds_alternative<BlockStmt>(inner->node)) return inner;
        BlockStmt block;
        block.stmts.push_back(std::move(inner));
        auto stmt = std::make_unique<Stmt>();
        stmt->node = std::move(block);
        stmt->loc = loc;
        return stmt;
    }

    StmtPtr parseIf() {
        SourceLoc loc = here();
        expect(Tok::KwIf);
        expect(Tok::LParen);
        IfStmt node;
        node.cond = parseExpr();
        expect(Tok::RParen);
        node.thenBody = parseBody();
        if (accept(Tok::KwElse)) node.elseBody = parseBody();
        auto stmt = std::make_unique<Stmt>();
        stmt->node = std::move(node);
        stmt->loc = loc;
        return stmt;
    }

    StmtPtr parseFor() {
        SourceLoc loc = here();
        expect(Tok::KwFor);
        expect(Tok::LParen);
        ForStmt node;
        node.varLoc = here();
        node.var = expect(Tok::Ident).lexeme;
        expect(Tok::Assign);
        node.start = parseExpr();
        expect(Tok::Semi);
        const Token &testVar = expect(Tok::Ident);
        if (testVar.lexeme != node.var)
            fail("the loop test must use the loop variable '" + node.var + "'");
        expect(Tok::Le);
        node.end = parseExpr();
        expect(Tok::Semi);
        const Token &incrVar = expect(Tok::Ident);
        if (incrVar.lexeme != node.var)
            fail("the loop increment must use the loop variable '" + node.var + "'");
        expect(Tok::PlusPlus);
        expect(Tok::RParen);
        node.body = parseBody();
        auto stmt = std::make_unique<Stmt>();
        stmt->node = std::move(node);
        stmt->loc = loc;
        return stmt;
    }

    // ------------------------------------------------------------------
    // Expressions
    // ------------------------------------------------------------------

    VarRefExpr parseVarRefParts() {
        VarRefExpr ref;
        ref.name = expect(Tok::Ident).lexeme;
        if (accept(Tok::LBracket)) {
            ref.index = parseExpr();
            expect(Tok::RBracket);
        }
        if (accept(Tok::Dot)) ref.field = expect(Tok::Ident).lexeme;
        return ref;
    }

    ExprPtr makeExpr(SourceLoc loc, auto node) {
        auto expr = std::make_unique<Expr>();
        expr->node = std::move(node);
        expr->loc = loc;
        return expr;
    }

    struct DepthGuard {
        Parser &p;
        explicit DepthGuard(Parser &parser) : p(parser) {
            if (++p.exprDepth_ > kMaxExprDepth) p.fail("expression is nested too deeply");
        }
        ~DepthGuard() { p.exprDepth_--; }
    };

    ExprPtr parseExpr() { return parseOr(); }

    ExprPtr parseOr() {
        DepthGuard guard(*this);
        ExprPtr lhs = parseAnd();
        while (at(Tok::KwOr)) {
            SourceLoc loc = here();
            pos_++;
            BinaryExpr bin{BinaryOp::Or, std::move(lhs), parseAnd()};
            lhs = makeExpr(loc, std::move(bin));
        }
        return lhs;
    }

    ExprPtr parseAnd() {
        DepthGuard guard(*this);
        ExprPtr lhs = parseCmp();
        while (at(Tok::KwAnd)) {
            SourceLoc loc = here();
            pos_++;
            BinaryExpr bin{BinaryOp::And, std::move(lhs), parseCmp()};
            lhs = makeExpr(loc, std::move(bin));
        }
        return lhs;
    }

    std::optional<BinaryOp> cmpOp() const {
        if (done()) return std::nullopt;
        switch (peek().kind) {
        case Tok::EqEq: return BinaryOp::Eq;
        case Tok::NotEq: return BinaryOp::Ne;
        case Tok::Lt: return BinaryOp::Lt;
        case Tok::Le: return BinaryOp::Le;
        case Tok::Gt: return BinaryOp::Gt;
        case Tok::Ge: return BinaryOp::Ge;
        default: return std::nullopt;
        }
    }

    ExprPtr parseCmp() {
        DepthGuard guard(*this);
        ExprPtr lhs = parseAdd();
        while (auto op = cmpOp()) {
            SourceLoc loc = here();
            pos_++;
            BinaryExpr bin{*op, std::move(lhs), parseAdd()};
            lhs = makeExpr(loc, std::move(bin));
        }
        return lhs;
    }

    ExprPtr parseAdd() {
        DepthGuard guard(*this);
        ExprPtr lhs = parseMul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            SourceLoc loc = here();
            BinaryOp op = at(Tok::Plus) ? BinaryOp::Add : BinaryOp::Sub;
            pos_++;
            BinaryExpr bin{op, std::move(lhs), parseMul()};
            lhs = makeExpr(loc, std::move(bin));
        }
        return lhs;
    }

    ExprPtr parseMul() {
        DepthGuard guard(*this);
        ExprPtr lhs = parseUnary();
        while (at(Tok::Star) || at(Tok::Slash)) {
            SourceLoc loc = here();
            BinaryOp op = at(Tok::Star) ? BinaryOp::Mul : BinaryOp::Div;
            pos_++;
            BinaryExpr bin{op, std::move(lhs), parseUnary()};
            lhs = makeExpr(loc, std::move(bin));
        }
        return lhs;
    }

    ExprPtr parseUnary() {
        DepthGuard guard(*this);
        SourceLoc loc = here();
        if (at(Tok::Minus)) {
            pos_++;
            // A minus directly on a literal folds into a negative literal,
            // which keeps INT32_MIN representable.
            if (at(Tok::IntLit)) {
                const Token &tok = tokens_[pos_++];
                int64_t value = -literalValue(tok);
                if (value < std::numeric_limits<int32_t>::min())
                    fail("integer literal does not fit in 32 bits");
                return makeExpr(loc, IntLitExpr{static_cast<int32_t>(value)});
            }
            UnaryExpr un{UnaryOp::Neg, parseUnary()};
            return makeExpr(loc, std::move(un));
        }
        if (at(Tok::Bang)) {
            pos_++;
            UnaryExpr un{UnaryOp::Not, parseUnary()};
            return makeExpr(loc, std::move(un));
        }
        return parsePrimary();
    }

    ExprPtr parsePrimary() {
        DepthGuard guard(*this);
        SourceLoc loc = here();
        if (at(Tok::IntLit)) {
            const Token &tok = tokens_[pos_++];
            int64_t value = literalValue(tok);
            if (value > std::numeric_limits<int32_t>::max())
                fail("integer literal does not fit in 32 bits");
            return makeExpr(loc, IntLitExpr{static_cast<int32_t>(value)});
        }
        if (accept(Tok::TrueLit)) return makeExpr(loc, BoolLitExpr{true});
        if (accept(Tok::FalseLit)) return makeExpr(loc, BoolLitExpr{false});
        if (at(Tok::Ident)) return makeExpr(loc, parseVarRefParts());
        if (accept(Tok::LParen)) {
            ExprPtr inner = parseExpr();
            expect(Tok::RParen);
            return inner;
        }
        fail(std::string("expected an expression, found ") + found());
    }
};

} // namespace

ParseResult parse(const std::vector<Token> &tokens) { return Parser(tokens).run(); }

ParseResult parseSource(std::string_view source) {
    LexResult lexed = tokenize(source);
    if (!lexed.ok()) {
        ParseResult result;
        result.diags = std::move(lexed.diags);
        return result;
    }
    return parse(lexed.tokens);
}

} // namespace macrocell
