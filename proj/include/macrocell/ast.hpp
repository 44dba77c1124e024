// macrocell/ast.hpp - abstract syntax tree for the adaptation language.
//
// Declarations come first (externals, then locals), followed by statements.
// Statement forms are assignment, if/else, bounded for, and brace blocks;
// there are no calls, no returns and no unbounded loops.
#pragma once

#include "macrocell/diag.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace macrocell {

enum class ScalarKind { Bool, Int8, Int16, Int32 };

uint32_t scalarSize(ScalarKind kind); // bool=1, int8=1, int16=2, int32=4
const char *scalarName(ScalarKind kind);
bool isIntKind(ScalarKind kind);

struct StructField {
    std::string name;
    ScalarKind type;
    bool operator==(const StructField &) const = default;
};

struct StructType {
    std::vector<StructField> fields;
    bool operator==(const StructType &) const = default;
};

// A declared variable's type: scalar or struct, optionally an array of it
// with inclusive compile-time bounds lo..hi.
struct VarType {
    std::variant<ScalarKind, StructType> elem;
    bool isArray = false;
    int32_t lo = 0;
    int32_t hi = 0;

    bool isStructElem() const { return std::holds_alternative<StructType>(elem); }
    const StructType &structElem() const { return std::get<StructType>(elem); }
    ScalarKind scalarElem() const { return std::get<ScalarKind>(elem); }
    int64_t elementCount() const { return isArray ? int64_t(hi) - int64_t(lo) + 1 : 1; }
    bool operator==(const VarType &) const = default;
};

uint64_t elementSize(const VarType &type); // byte size of one element, packed
uint64_t varSize(const VarType &type);     // total byte size, packed

struct VarDecl {
    std::string name;
    bool isLocal = false;
    VarType type;
    int declOrder = 0;
    SourceLoc loc;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLitExpr {
    int32_t value;
};

struct BoolLitExpr {
    bool value;
};

enum class IndexMode { None, Constant, Dynamic };

// `name`, `name[index]`, `name.field` or `name[index].field`.
// The analyzer fills the resolved* fields.
struct VarRefExpr {
    std::string name;
    ExprPtr index;     // null when no subscript
    std::string field; // empty when no member access

    int resolvedDecl = -1; // index into Ast::decls
    IndexMode indexMode = IndexMode::None;
    int32_t constIndex = 0;            // valid when indexMode == Constant
    ScalarKind leafType = ScalarKind::Bool; // type of the referenced scalar
};

enum class UnaryOp { Neg, Not };

struct UnaryExpr {
    UnaryOp op;
    ExprPtr operand;
};

enum class BinaryOp { Add, Sub, Mul, Div, And, Or, Eq, Ne, Lt, Le, Gt, Ge };

const char *binaryOpSpelling(BinaryOp op);

struct BinaryExpr {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Expr {
    std::variant<IntLitExpr, BoolLitExpr, VarRefExpr, UnaryExpr, BinaryExpr> node;
    SourceLoc loc;
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct AssignStmt {
    VarRefExpr target;
    SourceLoc targetLoc;
    ExprPtr value;
};

struct IfStmt {
    ExprPtr cond;
    StmtPtr thenBody;
    StmtPtr elseBody; // null when absent
};

// `for (v = start; v <= end; v++) body` with literal bounds.
// tripCount is filled by the analyzer: max(0, end - start + 1).
struct ForStmt {
    std::string var;
    SourceLoc varLoc;
    ExprPtr start;
    ExprPtr end;
    StmtPtr body;

    int resolvedDecl = -1;
    int64_t startValue = 0;
    int64_t endValue = 0;
    int64_t tripCount = -1;
};

struct BlockStmt {
    std::vector<StmtPtr> stmts;
};

struct Stmt {
    std::variant<AssignStmt, IfStmt, ForStmt, BlockStmt> node;
    SourceLoc loc;
};

struct Ast {
    std::vector<VarDecl> decls;
    std::vector<StmtPtr> stmts;
};

// Structural equality, ignoring source locations and analyzer annotations.
bool astEqual(const Ast &a, const Ast &b);
bool exprEqual(const Expr &a, const Expr &b);
bool stmtEqual(const Stmt &a, const Stmt &b);

// Canonical source form; parsing it back yields a structurally equal Ast.
std::string printAst(const Ast &ast);

} // namespace macrocell
