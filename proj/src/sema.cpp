#include "macrocell/sema.hpp"

#include <limits>
#include <set>
#include <sstream>

namespace macrocell {

namespace {

constexpr uint64_t kMaxRegionBytes = 0x7FFFFFFF;

enum class ValueType { Bool, Int, Error };

struct Analyzer {
    Ast &ast;
    std::unordered_map<std::string, int> symbols;
    std::vector<Diagnostic> diags;
    std::set<int> activeLoopVars;

    void report(DiagCode code, SourceLoc loc, std::string message) {
        diags.push_back(Diagnostic{code, loc, std::move(message)});
    }

    void declare() {
        for (size_t i = 0; i < ast.decls.size(); i++) {
            VarDecl &decl = ast.decls[i];
            auto [it, inserted] = symbols.emplace(decl.name, static_cast<int>(i));
            if (!inserted)
                report(DiagCode::DuplicateDeclaration, decl.loc,
                       "variable '" + decl.name + "' is already declared");
            if (decl.type.isStructElem()) {
                std::set<std::string> seen;
                for (const StructField &field : decl.type.structElem().fields)
                    if (!seen.insert(field.name).second)
                        report(DiagCode::DuplicateDeclaration, decl.loc,
                               "field '" + field.name + "' is already declared in '" +
                                   decl.name + "'");
            }
        }

        uint64_t externalTotal = 0;
        uint64_t localTotal = 0;
        for (const VarDecl &decl : ast.decls) {
            uint64_t size = varSize(decl.type);
            uint64_t &total = decl.isLocal ? localTotal : externalTotal;
            total += size;
            if (size > kMaxRegionBytes || total > kMaxRegionBytes) {
                report(DiagCode::LayoutTooLarge, decl.loc,
                       std::string("the ") + (decl.isLocal ? "local" : "external") +
                           " variable region exceeds 2147483647 bytes");
                break;
            }
        }
    }

    // Resolves a variable reference and returns the type of the scalar it
    // names. Fills resolvedDecl / indexMode / constIndex / leafType.
    ValueType checkVarRef(VarRefExpr &ref, SourceLoc loc) {
        auto it = symbols.find(ref.name);
        if (it == symbols.end()) {
            report(DiagCode::UndeclaredIdentifier, loc,
                   "'" + ref.name + "' is not declared");
            return ValueType::Error;
        }
        ref.resolvedDecl = it->second;
        const VarDecl &decl = ast.decls[size_t(it->second)];

        if (decl.type.isArray && !ref.index) {
            report(DiagCode::TypeMismatch, loc,
                   "'" + ref.name + "' is an array and needs an index");
            return ValueType::Error;
        }
        if (!decl.type.isArray && ref.index) {
            report(DiagCode::TypeMismatch, loc, "'" + ref.name + "' is not an array");
            return ValueType::Error;
        }

        if (ref.index) {
            if (const auto *lit = std::get_if<IntLitExpr>(&ref.index->node)) {
                ref.indexMode = IndexMode::Constant;
                ref.constIndex = lit->value;
                if (lit->value < decl.type.lo || lit->value > decl.type.hi) {
                    std::ostringstream msg;
                    msg << "index " << lit->value << " is outside '" << ref.name << "["
                        << decl.type.lo << ".." << decl.type.hi << "]'";
                    report(DiagCode::ConstantIndexOutOfBounds, ref.index->loc, msg.str());
                    return ValueType::Error;
                }
            } else {
                ref.indexMode = IndexMode::Dynamic;
                ValueType indexType = checkExpr(*ref.index);
                if (indexType == ValueType::Bool) {
                    report(DiagCode::TypeMismatch, ref.index->loc,
                           "array index must be an integer");
                    return ValueType::Error;
                }
                if (indexType == ValueType::Error) return ValueType::Error;
                if (decl.isLocal) {
                    report(DiagCode::DynamicLocalIndex, ref.index->loc,
                           "local array '" + ref.name +
                               "' cannot take a computed index; only external arrays "
                               "support runtime indexing");
                    return ValueType::Error;
                }
            }
        }

        if (decl.type.isStructElem()) {
            if (ref.field.empty()) {
                report(DiagCode::TypeMismatch, loc,
                       "'" + ref.name + "' is a struct and needs a field");
                return ValueType::Error;
            }
            for (const StructField &field : decl.type.structElem().fields) {
                if (field.name == ref.field) {
                    ref.leafType = field.type;
                    return field.type == ScalarKind::Bool ? ValueType::Bool : ValueType::Int;
                }
            }
            report(DiagCode::TypeMismatch, loc,
                   "'" + ref.name + "' has no field named '" + ref.field + "'");
            return ValueType::Error;
        }
        if (!ref.field.empty()) {
            report(DiagCode::TypeMismatch, loc, "'" + ref.name + "' has no fields");
            return ValueType::Error;
        }
        ref.leafType = decl.type.scalarElem();
        return ref.leafType == ScalarKind::Bool ? ValueType::Bool : ValueType::Int;
    }

    ValueType checkExpr(Expr &expr) {
        if (std::holds_alternative<IntLitExpr>(expr.node)) return ValueType::Int;
        if (std::holds_alternative<BoolLitExpr>(expr.node)) return ValueType::Bool;
        if (auto *ref = std::get_if<VarRefExpr>(&expr.node))
            return checkVarRef(*ref, expr.loc);
        if (auto *un = std::get_if<UnaryExpr>(&expr.node)) {
            ValueType operand = checkExpr(*un->operand);
            if (operand == ValueType::Error) return ValueType::Error;
            if (un->op == UnaryOp::Neg) {
                if (operand != ValueType::Int) {
                    report(DiagCode::TypeMismatch, expr.loc, "'-' needs an integer operand");
                    return ValueType::Error;
                }
                return ValueType::Int;
            }
            if (operand != ValueType::Bool) {
                report(DiagCode::TypeMismatch, expr.loc, "'!' needs a bool operand");
                return ValueType::Error;
            }
            return ValueType::Bool;
        }

        auto &bin = std::get<BinaryExpr>(expr.node);
        ValueType lhs = checkExpr(*bin.lhs);
        ValueType rhs = checkExpr(*bin.rhs);
        if (lhs == ValueType::Error || rhs == ValueType::Error) return ValueType::Error;

        switch (bin.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
        case BinaryOp::Mul:
        case BinaryOp::Div:
            if (lhs != ValueType::Int || rhs != ValueType::Int) {
                report(DiagCode::TypeMismatch, expr.loc,
                       std::string("'") + binaryOpSpelling(bin.op) +
                           "' needs integer operands");
                return ValueType::Error;
            }
            return ValueType::Int;
        case BinaryOp::And:
        case BinaryOp::Or:
            if (lhs != ValueType::Bool || rhs != ValueType::Bool) {
                report(DiagCode::TypeMismatch, expr.loc,
                       std::string("'") + binaryOpSpelling(bin.op) + "' needs bool operands");
                return ValueType::Error;
            }
            return ValueType::Bool;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
            if (lhs != rhs) {
                report(DiagCode::TypeMismatch, expr.loc,
                       "'==' and '!=' need operands of the same kind");
                return ValueType::Error;
            }
            return ValueType::Bool;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
            if (lhs != ValueType::Int || rhs != ValueType::Int) {
                report(DiagCode::TypeMismatch, expr.loc,
                       std::string("'") + binaryOpSpelling(bin.op) +
                           "' needs integer operands");
                return ValueType::Error;
            }
            return ValueType::Bool;
        }
        return ValueType::Error;
    }

    void checkAssign(AssignStmt &assign) {
        ValueType target = checkVarRef(assign.target, assign.targetLoc);
        if (assign.target.resolvedDecl >= 0 &&
            activeLoopVars.count(assign.target.resolvedDecl))
            report(DiagCode::LoopVarAssigned, assign.targetLoc,
                   "'" + assign.target.name + "' is the variable of an enclosing loop");
        ValueType value = checkExpr(*assign.value);
        if (target == ValueType::Error || value == ValueType::Error) return;
        if (target != value)
            report(DiagCode::TypeMismatch, assign.targetLoc,
                   target == ValueType::Bool
                       ? "cannot assign an integer to a bool variable"
                       : "cannot assign a bool to an integer variable");
    }

    static int64_t scalarMin(ScalarKind kind) {
        switch (kind) {
        case ScalarKind::Int8: return -128;
        case ScalarKind::Int16: return -32768;
        case ScalarKind::Int32: return std::numeric_limits<int32_t>::min();
        default: return 0;
        }
    }

    static int64_t scalarMax(ScalarKind kind) {
        switch (kind) {
        case ScalarKind::Int8: return 127;
        case ScalarKind::Int16: return 32767;
        case ScalarKind::Int32: return std::numeric_limits<int32_t>::max();
        default: return 1;
        }
    }

    void checkFor(ForStmt &loop, SourceLoc loc) {
        auto it = symbols.find(loop.var);
        if (it == symbols.end()) {
            report(DiagCode::UndeclaredIdentifier, loop.varLoc,
                   "'" + loop.var + "' is not declared");
            return;
        }
        loop.resolvedDecl = it->second;
        const VarDecl &decl = ast.decls[size_t(it->second)];
        if (!decl.isLocal || decl.type.isArray || decl.type.isStructElem() ||
            decl.type.scalarElem() == ScalarKind::Bool) {
            report(DiagCode::LoopVarNotLocalScalar, loop.varLoc,
                   "loop variable '" + loop.var + "' must be a local integer scalar");
            return;
        }

        const auto *startLit = std::get_if<IntLitExpr>(&loop.start->node);
        const auto *endLit = std::get_if<IntLitExpr>(&loop.end->node);
        if (!startLit || !endLit) {
            report(DiagCode::NonLiteralLoopBound, (startLit ? loop.end : loop.start)->loc,
                   "loop bounds must be integer literals");
            return;
        }
        loop.startValue = startLit->value;
        loop.endValue = endLit->value;

        // The counter must hold every value from start to end + 1: the
        // final increment past end must not wrap, or the test would never
        // turn false.
        ScalarKind kind = decl.type.scalarElem();
        if (loop.startValue < scalarMin(kind) || loop.startValue > scalarMax(kind) ||
            loop.endValue < scalarMin(kind) || loop.endValue + 1 > scalarMax(kind)) {
            std::ostringstream msg;
            msg << "bounds " << loop.startValue << ".." << loop.endValue
                << " (plus the final increment) must fit in " << scalarName(kind);
            report(DiagCode::LoopBoundOverflow, loc, msg.str());
            return;
        }

        loop.tripCount = std::max<int64_t>(0, loop.endValue - loop.startValue + 1);

        if (activeLoopVars.count(loop.resolvedDecl)) {
            report(DiagCode::LoopVarAssigned, loop.varLoc,
                   "'" + loop.var + "' is already the variable of an enclosing loop");
            return;
        }
        activeLoopVars.insert(loop.resolvedDecl);
        checkStmt(*loop.body);
        activeLoopVars.erase(loop.resolvedDecl);
    }

    void checkStmt(Stmt &stmt) {
        if (auto *assign = std::get_if<AssignStmt>(&stmt.node)) {
            checkAssign(*assign);
            return;
        }
        if (auto *ifStmt = std::get_if<IfStmt>(&stmt.node)) {
            ValueType cond = checkExpr(*ifStmt->cond);
            if (cond == ValueType::Int)
                report(DiagCode::TypeMismatch, ifStmt->cond->loc,
                       "an if condition must be bool");
            checkStmt(*ifStmt->thenBody);
            if (ifStmt->elseBody) checkStmt(*ifStmt->elseBody);
            return;
        }
        if (auto *forStmt = std::get_if<ForStmt>(&stmt.node)) {
            checkFor(*forStmt, stmt.loc);
            return;
        }
        for (StmtPtr &child : std::get<BlockStmt>(stmt.node).stmts) checkStmt(*child);
    }

    void run() {
        declare();
        for (StmtPtr &stmt : ast.stmts) checkStmt(*stmt);
    }
};

} // namespace

AnalyzeResult analyze(Ast ast) {
    AnalyzeResult result;
    Analyzer analyzer{ast, {}, {}, {}};
    analyzer.run();
    result.diags = std::move(analyzer.diags);
    if (result.diags.empty())
        result.program = TypedProgram{std::move(ast), std::move(analyzer.symbols)};
    return result;
}

AnalyzeResult analyzeSource(std::string_view source) {
    ParseResult parsed = parseSource(source);
    if (!parsed.ok()) {
        AnalyzeResult result;
        result.diags = std::move(parsed.diags);
        return result;
    }
    return analyze(std::move(*parsed.ast));
}

} // namespace macrocell
