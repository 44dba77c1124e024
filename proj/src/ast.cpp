#include "macrocell/ast.hpp"

#include <sstream>

namespace macrocell {

uint32_t scalarSize(ScalarKind kind) {
    switch (kind) {
    case ScalarKind::Bool: return 1;
    case ScalarKind::Int8: return 1;
    case ScalarKind::Int16: return 2;
    case ScalarKind::Int32: return 4;
    }
    return 0;
}

const char *scalarName(ScalarKind kind) {
    switch (kind) {
    case ScalarKind::Bool: return "bool";
    case ScalarKind::Int8: return "int8";
    case ScalarKind::Int16: return "int16";
    case ScalarKind::Int32: return "int32";
    }
    return "?";
}

bool isIntKind(ScalarKind kind) { return kind != ScalarKind::Bool; }

uint64_t elementSize(const VarType &type) {
    if (type.isStructElem()) {
        uint64_t size = 0;
        for (const StructField &f : type.structElem().fields) size += scalarSize(f.type);
        return size;
    }
    return scalarSize(type.scalarElem());
}

uint64_t varSize(const VarType &type) {
    return elementSize(type) * static_cast<uint64_t>(type.elementCount());
}

const char *binaryOpSpelling(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

namespace {

bool varRefEqual(const VarRefExpr &a, const VarRefExpr &b) {
    if (a.name != b.name || a.field != b.field) return false;
    if ((a.index == nullptr) != (b.index == nullptr)) return false;
    return a.index == nullptr || exprEqual(*a.index, *b.index);
}

} // namespace

bool exprEqual(const Expr &a, const Expr &b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto *ia = std::get_if<IntLitExpr>(&a.node))
        return ia->value == std::get<IntLitExpr>(b.node).value;
    if (const auto *ba = std::get_if<BoolLitExpr>(&a.node))
        return ba->value == std::get<BoolLitExpr>(b.node).value;
    if (const auto *va = std::get_if<VarRefExpr>(&a.node))
        return varRefEqual(*va, std::get<VarRefExpr>(b.node));
    if (const auto *ua = std::get_if<UnaryExpr>(&a.node)) {
        const auto &ub = std::get<UnaryExpr>(b.node);
        return ua->op == ub.op && exprEqual(*ua->operand, *ub.operand);
    }
    const auto &xa = std::get<BinaryExpr>(a.node);
    const auto &xb = std::get<BinaryExpr>(b.node);
    return xa.op == xb.op && exprEqual(*xa.lhs, *xb.lhs) && exprEqual(*xa.rhs, *xb.rhs);
}

bool stmtEqual(const Stmt &a, const Stmt &b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto *aa = std::get_if<AssignStmt>(&a.node)) {
        const auto &ab = std::get<AssignStmt>(b.node);
        return varRefEqual(aa->target, ab.target) && exprEqual(*aa->value, *ab.value);
    }
    if (const auto *ia = std::get_if<IfStmt>(&a.node)) {
        const auto &ib = std::get<IfStmt>(b.node);
        if (!exprEqual(*ia->cond, *ib.cond)) return false;
        if (!stmtEqual(*ia->thenBody, *ib.thenBody)) return false;
        if ((ia->elseBody == nullptr) != (ib.elseBody == nullptr)) return false;
        return ia->elseBody == nullptr || stmtEqual(*ia->elseBody, *ib.elseBody);
    }
    if (const auto *fa = std::get_if<ForStmt>(&a.node)) {
        const auto &fb = std::get<ForStmt>(b.node);
        return fa->var == fb.var && exprEqual(*fa->start, *fb.start) &&
               exprEqual(*fa->end, *fb.end) && stmtEqual(*fa->body, *fb.body);
    }
    const auto &ba = std::get<BlockStmt>(a.node);
    const auto &bb = std::get<BlockStmt>(b.node);
    if (ba.stmts.size() != bb.stmts.size()) return false;
    for (size_t i = 0; i < ba.stmts.size(); i++)
        if (!stmtEqual(*ba.stmts[i], *bb.stmts[i])) return false;
    return true;
}

bool astEqual(const Ast &a, const Ast &b) {
    if (a.decls.size() != b.decls.size() || a.stmts.size() != b.stmts.size()) return false;
    for (size_t i = 0; i < a.decls.size(); i++) {
        const VarDecl &da = a.decls[i];
        const VarDecl &db = b.decls[i];
        if (da.name != db.name || da.isLocal != db.isLocal || !(da.type == db.type)) return false;
    }
    for (size_t i = 0; i < a.stmts.size(); i++)
        if (!stmtEqual(*a.stmts[i], *b.stmts[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Canonical printer
// ---------------------------------------------------------------------------

namespace {

// Operator strength for minimal parenthesization; higher binds tighter.
int precedence(BinaryOp op) {
    switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 6;
    }
    return 0;
}

struct Printer {
    std::ostringstream out;

    void indent(int depth) {
        for (int i = 0; i < depth; i++) out << "    ";
    }

    void printVarRef(const VarRefExpr &ref) {
        out << ref.name;
        if (ref.index) {
            out << '[';
            printExpr(*ref.index, 0);
            out << ']';
        }
        if (!ref.field.empty()) out << '.' << ref.field;
    }

    // parentPrec: precedence context; parenthesize when this node binds
    // no tighter. Binary ops are left-associative, so the right child sees
    // prec + 1.
    void printExpr(const Expr &expr, int parentPrec) {
        if (const auto *i = std::get_if<IntLitExpr>(&expr.node)) {
            if (i->value < 0)
                out << '(' << i->value << ')';
            else
                out << i->value;
            return;
        }
        if (const auto *b = std::get_if<BoolLitExpr>(&expr.node)) {
            out << (b->value ? "true" : "false");
            return;
        }
        if (const auto *v = std::get_if<VarRefExpr>(&expr.node)) {
            printVarRef(*v);
            return;
        }
        if (const auto *u = std::get_if<UnaryExpr>(&expr.node)) {
            out << (u->op == UnaryOp::Neg ? "-" : "!");
            out << '(';
            printExpr(*u->operand, 0);
            out << ')';
            return;
        }
        const auto &bin = std::get<BinaryExpr>(expr.node);
        int prec = precedence(bin.op);
        bool parens = prec < parentPrec;
        if (parens) out << '(';
        printExpr(*bin.lhs, prec);
        out << ' ' << binaryOpSpelling(bin.op) << ' ';
        printExpr(*bin.rhs, prec + 1);
        if (parens) out << ')';
    }

    void printStmt(const Stmt &stmt, int depth) {
        if (const auto *a = std::get_if<AssignStmt>(&stmt.node)) {
            indent(depth);
            printVarRef(a->target);
            out << " = ";
            printExpr(*a->value, 0);
            out << ";\n";
            return;
        }
        if (const auto *i = std::get_if<IfStmt>(&stmt.node)) {
            indent(depth);
            out << "if (";
            printExpr(*i->cond, 0);
            out << ")\n";
            printBodyAsBlock(*i->thenBody, depth);
            if (i->elseBody) {
                indent(depth);
                out << "else\n";
                printBodyAsBlock(*i->elseBody, depth);
            }
            return;
        }
        if (const auto *f = std::get_if<ForStmt>(&stmt.node)) {
            indent(depth);
            out << "for (" << f->var << " = ";
            printExpr(*f->start, 0);
            out << "; " << f->var << " <= ";
            printExpr(*f->end, 0);
            out << "; " << f->var << "++)\n";
            printBodyAsBlock(*f->body, depth);
            return;
        }
        const auto &block = std::get<BlockStmt>(stmt.node);
        indent(depth);
        out << "{\n";
        for (const StmtPtr &s : block.stmts) printStmt(*s, depth + 1);
        indent(depth);
        out << "}\n";
    }

    // Bodies always print as brace blocks so the output is unambiguous;
    // a body that is already a block prints as itself.
    void printBodyAsBlock(const Stmt &body, int depth) {
        if (std::holds_alternative<BlockStmt>(body.node)) {
            printStmt(body, depth);
            return;
        }
        indent(depth);
        out << "{\n";
        printStmt(body, depth + 1);
        indent(depth);
        out << "}\n";
    }

    void printDecl(const VarDecl &decl) {
        if (decl.isLocal) out << "local ";
        if (decl.type.isStructElem()) {
            out << "struct {";
            for (const StructField &f : decl.type.structElem().fields)
                out << ' ' << scalarName(f.type) << ' ' << f.name << ';';
            out << " } " << decl.name;
        } else {
            out << scalarName(decl.type.scalarElem()) << ' ' << decl.name;
        }
        if (decl.type.isArray) out << '[' << decl.type.lo << ".." << decl.type.hi << ']';
        out << ";\n";
    }
};

} // namespace

std::string printAst(const Ast &ast) {
    Printer p;
    for (const VarDecl &decl : ast.decls)
        if (!decl.isLocal) p.printDecl(decl);
    for (const VarDecl &decl : ast.decls)
        if (decl.isLocal) p.printDecl(decl);
    if (!ast.decls.empty() && !ast.stmts.empty()) p.out << '\n';
    for (const StmtPtr &stmt : ast.stmts) p.printStmt(*stmt, 0);
    return p.out.str();
}

} // namespace macrocell
