#include "macrocell/codegen.hpp"

#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace macrocell {

namespace {

std::unique_ptr<WcetShape> makeRange(uint32_t begin, uint32_t end) {
    auto shape = std::make_unique<WcetShape>();
    shape->kind = WcetShape::Kind::Range;
    shape->begin = begin;
    shape->end = end;
    return shape;
}

std::unique_ptr<WcetShape> makeSeq(std::vector<std::unique_ptr<WcetShape>> children) {
    auto shape = std::make_unique<WcetShape>();
    shape->kind = WcetShape::Kind::Seq;
    shape->children = std::move(children);
    return shape;
}

// Worst-case operand stack height while evaluating an expression that
// starts on an empty ledge. Evaluation leaves exactly one value.
int exprDepth(const Expr &expr);

int varRefDepth(const VarRefExpr &ref) {
    if (ref.indexMode == IndexMode::Dynamic)
        return std::max(exprDepth(*ref.index), 2);
    return 1;
}

int exprDepth(const Expr &expr) {
    if (std::holds_alternative<IntLitExpr>(expr.node)) return 1;
    if (std::holds_alternative<BoolLitExpr>(expr.node)) return 1;
    if (const auto *ref = std::get_if<VarRefExpr>(&expr.node)) return varRefDepth(*ref);
    if (const auto *un = std::get_if<UnaryExpr>(&expr.node)) return exprDepth(*un->operand);
    const auto &bin = std::get<BinaryExpr>(expr.node);
    return std::max(exprDepth(*bin.lhs), 1 + exprDepth(*bin.rhs));
}

OpCode binaryOpCode(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return OpCode::Add;
    case BinaryOp::Sub: return OpCode::Sub;
    case BinaryOp::Mul: return OpCode::Mul;
    case BinaryOp::Div: return OpCode::Div;
    case BinaryOp::And: return OpCode::And;
    case BinaryOp::Or: return OpCode::Or;
    case BinaryOp::Eq: return OpCode::CmpEq;
    case BinaryOp::Ne: return OpCode::CmpNe;
    case BinaryOp::Lt: return OpCode::CmpLt;
    case BinaryOp::Le: return OpCode::CmpLe;
    case BinaryOp::Gt: return OpCode::CmpGt;
    case BinaryOp::Ge: return OpCode::CmpGe;
    }
    return OpCode::Halt;
}

struct EmitAbort {};

class Emitter {
  public:
    Emitter(const TypedProgram &program, const VariableLayout &layout) : program_(program) {
        size_t ext = 0;
        size_t loc = 0;
        for (size_t i = 0; i < program.ast.decls.size(); i++) {
            if (program.ast.decls[i].isLocal)
                declOffset_[static_cast<int>(i)] = layout.locals[loc++].offset;
            else
                declOffset_[static_cast<int>(i)] = layout.externals[ext++].offset;
        }
    }

    Expected<CodegenResult, CodegenError> run() {
        try {
            std::vector<std::unique_ptr<WcetShape>> shapes;
            for (const StmtPtr &stmt : program_.ast.stmts) shapes.push_back(emitStmt(*stmt));
            uint32_t haltIdx = index();
            emit(OpCode::Halt);
            shapes.push_back(makeRange(haltIdx, haltIdx + 1));

            if (auto err = patchJumps()) return *err;

            CodegenResult result;
            result.code = makeMacroCode(std::move(out_));
            result.map.root = makeSeq(std::move(shapes));
            return result;
        } catch (EmitAbort &) {
            return error_;
        }
    }

  private:
    const TypedProgram &program_;
    std::unordered_map<int, uint32_t> declOffset_;
    std::vector<Instruction> out_;
    std::vector<std::pair<size_t, size_t>> patches_; // jump index -> target index
    CodegenError error_{};

    [[noreturn]] void fail(CodegenError::Kind kind, std::string detail) {
        error_ = CodegenError{kind, std::move(detail)};
        throw EmitAbort{};
    }

    uint32_t index() const { return static_cast<uint32_t>(out_.size()); }

    void emit(OpCode op, int32_t a = 0, int32_t b = 0) { out_.push_back({op, a, b}); }

    // Emits a jump with the target instruction index resolved to a byte
    // offset once all code exists.
    size_t emitJump(OpCode op) {
        patches_.emplace_back(out_.size(), 0);
        emit(op);
        return patches_.size() - 1;
    }

    void resolveJump(size_t patch, uint32_t targetIndex) {
        patches_[patch].second = targetIndex;
    }

    std::optional<CodegenError> patchJumps() {
        std::vector<int64_t> byteOffset(out_.size() + 1, 0);
        for (size_t i = 0; i < out_.size(); i++)
            byteOffset[i + 1] = byteOffset[i] + encodedLength(out_[i]);
        for (auto [jumpIdx, targetIdx] : patches_) {
            int64_t target = byteOffset[targetIdx];
            if (target > std::numeric_limits<int32_t>::max())
                return CodegenError{CodegenError::JumpOutOfRange,
                                    "jump target offset exceeds the 32-bit operand range"};
            out_[jumpIdx].a = static_cast<int32_t>(target);
        }
        return std::nullopt;
    }

    void requireDepth(int needed, SourceLoc loc) {
        if (needed > kStackDepth) {
            std::ostringstream msg;
            msg << "the expression at line " << loc.line << " needs " << needed
                << " operand stack slots; the machine has " << kStackDepth;
            fail(CodegenError::ExpressionTooDeep, msg.str());
        }
    }

    struct Place {
        bool isLocal;
        uint32_t width;
        int32_t staticOffset; // full offset for static access; base for dynamic
        bool dynamic;
        int32_t lo = 0, hi = 0, elemSize = 0;
        const Expr *indexExpr = nullptr;
        bool isBool;
    };

    Place resolvePlace(const VarRefExpr &ref) {
        const VarDecl &decl = program_.decl(ref.resolvedDecl);
        Place place{};
        place.isLocal = decl.isLocal;
        place.width = scalarSize(ref.leafType);
        place.isBool = ref.leafType == ScalarKind::Bool;

        int64_t offset = declOffset_.at(ref.resolvedDecl);
        uint32_t elemSize = static_cast<uint32_t>(elementSize(decl.type));
        if (!ref.field.empty())
            offset += fieldOffset(decl.type.structElem(), ref.field);

        if (ref.indexMode == IndexMode::Dynamic) {
            place.dynamic = true;
            place.lo = decl.type.lo;
            place.hi = decl.type.hi;
            place.elemSize = static_cast<int32_t>(elemSize);
            place.indexExpr = ref.index.get();
        } else if (ref.indexMode == IndexMode::Constant) {
            offset += (int64_t(ref.constIndex) - decl.type.lo) * elemSize;
        }
        place.staticOffset = static_cast<int32_t>(offset);
        return place;
    }

    // Leaves the element's byte offset on top of the stack.
    void emitDynamicOffset(const Place &place) {
        emitExpr(*place.indexExpr);
        emit(OpCode::BoundsCheck, place.lo, place.hi);
        emit(OpCode::PushConst, place.lo);
        emit(OpCode::Sub);
        emit(OpCode::PushConst, place.elemSize);
        emit(OpCode::Mul);
        emit(OpCode::PushConst, place.staticOffset);
        emit(OpCode::Add);
    }

    void emitExpr(const Expr &expr) {
        if (const auto *lit = std::get_if<IntLitExpr>(&expr.node)) {
            emit(OpCode::PushConst, lit->value);
            return;
        }
        if (const auto *lit = std::get_if<BoolLitExpr>(&expr.node)) {
            emit(OpCode::PushConst, lit->value ? 1 : 0);
            return;
        }
        if (const auto *ref = std::get_if<VarRefExpr>(&expr.node)) {
            Place place = resolvePlace(*ref);
            if (place.dynamic) {
                emitDynamicOffset(place);
                emit(OpCode::LoadExtDyn, static_cast<int32_t>(place.width));
            } else if (place.isLocal) {
                emit(OpCode::LoadLoc, static_cast<int32_t>(place.width), place.staticOffset);
            } else {
                emit(OpCode::LoadExt, static_cast<int32_t>(place.width), place.staticOffset);
            }
            if (place.isBool) {
                // Normalize to 0/1 so any nonzero stored byte reads as true.
                emit(OpCode::Not);
                emit(OpCode::Not);
            }
            return;
        }
        if (const auto *un = std::get_if<UnaryExpr>(&expr.node)) {
            emitExpr(*un->operand);
            emit(un->op == UnaryOp::Neg ? OpCode::Neg : OpCode::Not);
            return;
        }
        const auto &bin = std::get<BinaryExpr>(expr.node);
        emitExpr(*bin.lhs);
        emitExpr(*bin.rhs);
        emit(binaryOpCode(bin.op));
    }

    std::unique_ptr<WcetShape> emitAssign(const AssignStmt &assign) {
        uint32_t begin = index();
        Place place = resolvePlace(assign.target);
        int depth = exprDepth(*assign.value);
        if (place.dynamic)
            depth = std::max(depth, 1 + std::max(exprDepth(*place.indexExpr), 2));
        requireDepth(depth, assign.targetLoc);

        emitExpr(*assign.value);
        if (place.dynamic) {
            emitDynamicOffset(place);
            emit(OpCode::StoreExtDyn, static_cast<int32_t>(place.width));
        } else if (place.isLocal) {
            emit(OpCode::StoreLoc, static_cast<int32_t>(place.width), place.staticOffset);
        } else {
            emit(OpCode::StoreExt, static_cast<int32_t>(place.width), place.staticOffset);
        }
        return makeRange(begin, index());
    }

    std::unique_ptr<WcetShape> emitIf(const IfStmt &stmt) {
        uint32_t condBegin = index();
        requireDepth(exprDepth(*stmt.cond), stmt.cond->loc);
        emitExpr(*stmt.cond);
        size_t skipThen = emitJump(OpCode::JumpIfFalse);
        uint32_t condEnd = index();

        auto shape = std::make_unique<WcetShape>();
        shape->kind = WcetShape::Kind::Branch;
        shape->cond = makeRange(condBegin, condEnd);

        auto thenShape = emitStmt(*stmt.thenBody);
        if (stmt.elseBody) {
            size_t skipElse = emitJump(OpCode::Jump);
            std::vector<std::unique_ptr<WcetShape>> thenParts;
            thenParts.push_back(std::move(thenShape));
            thenParts.push_back(makeRange(index() - 1, index()));
            shape->thenArm = makeSeq(std::move(thenParts));
            resolveJump(skipThen, index());
            shape->elseArm = emitStmt(*stmt.elseBody);
            resolveJump(skipElse, index());
        } else {
            shape->thenArm = std::move(thenShape);
            resolveJump(skipThen, index());
        }
        return shape;
    }

    std::unique_ptr<WcetShape> emitFor(const ForStmt &stmt) {
        const VarDecl &decl = program_.decl(stmt.resolvedDecl);
        int32_t width = static_cast<int32_t>(scalarSize(decl.type.scalarElem()));
        int32_t offset = static_cast<int32_t>(declOffset_.at(stmt.resolvedDecl));

        auto shape = std::make_unique<WcetShape>();
        shape->kind = WcetShape::Kind::Loop;
        shape->tripCount = static_cast<uint64_t>(stmt.tripCount);

        uint32_t initBegin = index();
        emit(OpCode::PushConst, static_cast<int32_t>(stmt.startValue));
        emit(OpCode::StoreLoc, width, offset);
        shape->init = makeRange(initBegin, index());

        uint32_t testBegin = index();
        emit(OpCode::LoadLoc, width, offset);
        emit(OpCode::PushConst, static_cast<int32_t>(stmt.endValue));
        emit(OpCode::CmpLe);
        size_t exitJump = emitJump(OpCode::JumpIfFalse);
        shape->test = makeRange(testBegin, index());

        shape->body = emitStmt(*stmt.body);

        uint32_t incrBegin = index();
        emit(OpCode::LoadLoc, width, offset);
        emit(OpCode::PushConst, 1);
        emit(OpCode::Add);
        emit(OpCode::StoreLoc, width, offset);
        size_t backJump = emitJump(OpCode::Jump);
        resolveJump(backJump, testBegin);
        shape->incr = makeRange(incrBegin, index());

        resolveJump(exitJump, index());
        return shape;
    }

    std::unique_ptr<WcetShape> emitStmt(const Stmt &stmt) {
        if (const auto *assign = std::get_if<AssignStmt>(&stmt.node)) return emitAssign(*assign);
        if (const auto *ifStmt = std::get_if<IfStmt>(&stmt.node)) return emitIf(*ifStmt);
        if (const auto *forStmt = std::get_if<ForStmt>(&stmt.node)) return emitFor(*forStmt);
        const auto &block = std::get<BlockStmt>(stmt.node);
        std::vector<std::unique_ptr<WcetShape>> parts;
        for (const StmtPtr &child : block.stmts) parts.push_back(emitStmt(*child));
        return makeSeq(std::move(parts));
    }
};

} // namespace

Expected<CodegenResult, CodegenError> generateCode(const TypedProgram &program,
                                                   const VariableLayout &layout) {
    return Emitter(program, layout).run();
}

std::string disassemble(const MacroCode &code) {
    std::ostringstream out;
    uint32_t offset = 0;
    for (const Instruction &instr : code.instructions) {
        const OpInfo &info = opInfo(instr.op);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04x", offset);
        out << buf << ": " << info.mnemonic;
        if (info.operandCount >= 1) out << ' ' << instr.a;
        if (info.operandCount >= 2) out << ' ' << instr.b;
        out << '\n';
        offset += encodedLength(instr);
    }
    return out.str();
}

} // namespace macrocell
