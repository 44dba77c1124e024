// Variable layout, code generation, WCET analysis and the compile pipeline.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "macrocell/binfmt.hpp"
#include "macrocell/codegen.hpp"
#include "macrocell/compiler.hpp"
#include "macrocell/layout.hpp"
#include "macrocell/layout_io.hpp"
#include "macrocell/wcet.hpp"
#include "support/fixtures.hpp"

#include <sstream>
#include <string>
#include <vector>

using namespace macrocell;
using namespace macrocell::testing;

namespace {

CodegenResult generateOrDie(const TypedProgram &program, const VariableLayout &layout) {
    auto result = generateCode(program, layout);
    REQUIRE(result.ok());
    return std::move(result.value());
}

std::string mnemonics(const MacroCode &code) {
    std::string out;
    for (const Instruction &instr : code.instructions) {
        if (!out.empty()) out += ' ';
        out += opInfo(instr.op).mnemonic;
    }
    return out;
}

uint64_t wcetOrDie(const TypedProgram &program, const PerfData &perf) {
    VariableLayout layout = layoutVariables(program);
    CodegenResult generated = generateOrDie(program, layout);
    auto wcet = computeWcet(generated.code, generated.map, perf);
    REQUIRE(wcet.ok());
    return wcet.value();
}

} // namespace

TEST_CASE("reference program layout is packed in declaration order") {
    TypedProgram program = analyzeOrDie(kDecisionRuleSource);
    VariableLayout layout = layoutVariables(program);

    REQUIRE(layout.externals.size() == 2);
    CHECK(layout.externals[0].name == "ground");
    CHECK(layout.externals[0].offset == 0);
    CHECK(layout.externals[0].size == 1);
    CHECK(layout.externals[1].name == "calculator");
    CHECK(layout.externals[1].offset == 1);
    CHECK(layout.externals[1].size == 20); // 10 elements x (bool + int8)
    CHECK(layout.externalTotal == kDecisionRuleExternalBytes);

    REQUIRE(layout.locals.size() == 1);
    CHECK(layout.locals[0].name == "i");
    CHECK(layout.locals[0].offset == 0);
    CHECK(layout.locals[0].size == 1);
    CHECK(layout.localTotal == kDecisionRuleLocalBytes);
}

TEST_CASE("element and field offsets are packed") {
    TypedProgram program = analyzeOrDie(
        "bool a;\nstruct { int8 x; int16 y; int32 z; } s[2..5];\nint16 tail;\n");
    VariableLayout layout = layoutVariables(program);
    CHECK(layout.externals[1].offset == 1);
    CHECK(layout.externals[1].size == 4 * 7); // elements are 1+2+4 bytes
    CHECK(layout.externals[2].offset == 29);
    CHECK(layout.externalTotal == 31);

    const StructType &fields = program.ast.decls[1].type.structElem();
    CHECK(fieldOffset(fields, "x") == 0);
    CHECK(fieldOffset(fields, "y") == 1);
    CHECK(fieldOffset(fields, "z") == 3);
}

TEST_CASE("layout sidecar round-trips") {
    TypedProgram program = analyzeOrDie(kDecisionRuleSource);
    VariableLayout layout = layoutVariables(program);
    std::string text = emitLayoutFile(program, layout);

    auto parsed = parseLayoutFile(text);
    REQUIRE(parsed.ok());
    const LayoutFile &file = parsed.value();
    CHECK(file.externalTotal == kDecisionRuleExternalBytes);
    CHECK(file.localTotal == kDecisionRuleLocalBytes);
    REQUIRE(file.vars.size() == 3);
    CHECK(file.vars[0].name == "ground");
    CHECK(!file.vars[0].isLocal);
    CHECK(file.vars[0].type == program.ast.decls[0].type);
    CHECK(file.vars[1].name == "calculator");
    CHECK(file.vars[1].offset == 1);
    CHECK(file.vars[1].type == program.ast.decls[1].type);
    CHECK(file.vars[2].isLocal);
}

TEST_CASE("layout sidecar rejects inconsistent entries") {
    auto fails = [](std::string_view text) {
        auto parsed = parseLayoutFile(text);
        CHECK(!parsed.ok());
    };
    fails("external g offset=0 size=2 type=bool\nexternal_total 2\nlocal_total 0\n");
    fails("external g offset=0 size=1 type=bool\n"); // totals missing
    fails("external g offset=0 size=1 type=pointer\nexternal_total 1\nlocal_total 0\n");
    fails("external a offset=0 size=4 type=int8[2..1]\nexternal_total 4\nlocal_total 0\n");
    fails("somewhere g offset=0 size=1 type=bool\nexternal_total 1\nlocal_total 0\n");

    auto ok = parseLayoutFile("# comment\n\nexternal g offset=0 size=1 type=bool\n"
                              "external s offset=1 size=4 type=struct{on:bool,level:int8}[1..2]\n"
                              "local_total 0\nexternal_total 5\n");
    REQUIRE(ok.ok());
    CHECK(ok.value().vars[1].type.isArray);
    CHECK(ok.value().vars[1].type.structElem().fields[1].name == "level");
}

TEST_CASE("single assignment compiles to push, store, halt") {
    TypedProgram program = analyzeOrDie("bool b;\nb = true;\n");
    VariableLayout layout = layoutVariables(program);
    CodegenResult generated = generateOrDie(program, layout);
    CHECK(generated.code.instructions ==
          std::vector<Instruction>{{OpCode::PushConst, 1},
                                   {OpCode::StoreExt, 1, 0},
                                   {OpCode::Halt}});
    CHECK(generated.code.byteLength == 5 + 9 + 1);

    auto wcet = computeWcet(generated.code, generated.map, uniformPerf());
    REQUIRE(wcet.ok());
    CHECK(wcet.value() == 50 + 3);
}

TEST_CASE("constant indices fold to static offsets") {
    TypedProgram program = analyzeOrDie(
        "bool ground;\nstruct { bool powered; int8 criticity; } calculator[1..10];\n"
        "calculator[1].powered = false;\ncalculator[10].criticity = 7;\n");
    VariableLayout layout = layoutVariables(program);
    CodegenResult generated = generateOrDie(program, layout);
    CHECK(generated.code.instructions ==
          std::vector<Instruction>{{OpCode::PushConst, 0},
                                   {OpCode::StoreExt, 1, 1},  // base 1 + 0
                                   {OpCode::PushConst, 7},
                                   {OpCode::StoreExt, 1, 20}, // base 1 + 9*2 + 1
                                   {OpCode::Halt}});
}

TEST_CASE("dynamic access emits a bounds check and offset arithmetic") {
    TypedProgram program = analyzeOrDie(
        "struct { bool on; int8 level; } unit[3..7];\nint8 out;\nlocal int8 i;\n"
        "for (i=3; i<=7; i++) out = unit[i].level;\n");
    VariableLayout layout = layoutVariables(program);
    CodegenResult generated = generateOrDie(program, layout);
    CHECK(mnemonics(generated.code) ==
          // init          test
          "PUSH_CONST STORE_LOC LOAD_LOC PUSH_CONST CMP_LE JUMP_IF_FALSE "
          // read unit[i].level: index, check, (i-lo)*elem + base
          "LOAD_LOC BOUNDS_CHECK PUSH_CONST SUB PUSH_CONST MUL PUSH_CONST ADD LOAD_EXT_DYN "
          // store out     incr                                   back
          "STORE_EXT LOAD_LOC PUSH_CONST ADD STORE_LOC JUMP HALT");

    // The bounds check uses the declared range; the base folds the field.
    const auto &instructions = generated.code.instructions;
    CHECK(instructions[7] == Instruction{OpCode::BoundsCheck, 3, 7});
    CHECK(instructions[8] == Instruction{OpCode::PushConst, 3});  // lo
    CHECK(instructions[10] == Instruction{OpCode::PushConst, 2}); // element size
    CHECK(instructions[12] == Instruction{OpCode::PushConst, 1}); // base 0 + field 1
    CHECK(instructions[14] == Instruction{OpCode::LoadExtDyn, 1});
}

TEST_CASE("bool loads canonicalize to 0 or 1") {
    TypedProgram program = analyzeOrDie("bool a;\nbool b;\nb = a;\n");
    VariableLayout layout = layoutVariables(program);
    CodegenResult generated = generateOrDie(program, layout);
    CHECK(mnemonics(generated.code) == "LOAD_EXT NOT NOT STORE_EXT HALT");

    // Int loads stay raw: sign extension is the load's own job.
    TypedProgram ints = analyzeOrDie("int8 a;\nint8 b;\nb = a;\n");
    CodegenResult intCode = generateOrDie(ints, layoutVariables(ints));
    CHECK(mnemonics(intCode.code) == "LOAD_EXT STORE_EXT HALT");
}

TEST_CASE("reference program compiles to the pinned instruction stream") {
    CompileOutput output = compileOrDie(kDecisionRuleSource, {uniformPerf()});
    CHECK(output.file.code.byteLength == kDecisionRuleCodeBytes);
    REQUIRE(output.file.code.instructions.size() == 41);
    CHECK(mnemonics(output.file.code) ==
          // if (ground)
          "LOAD_EXT NOT NOT JUMP_IF_FALSE "
          // calculator[1].powered = false; skip else
          "PUSH_CONST STORE_EXT JUMP "
          // for init and test
          "PUSH_CONST STORE_LOC LOAD_LOC PUSH_CONST CMP_LE JUMP_IF_FALSE "
          // calculator[i].criticity < 5
          "LOAD_LOC BOUNDS_CHECK PUSH_CONST SUB PUSH_CONST MUL PUSH_CONST ADD "
          "LOAD_EXT_DYN PUSH_CONST CMP_LT JUMP_IF_FALSE "
          // calculator[i].powered = false
          "PUSH_CONST LOAD_LOC BOUNDS_CHECK PUSH_CONST SUB PUSH_CONST MUL "
          "PUSH_CONST ADD STORE_EXT_DYN "
          // i++ and back edge
          "LOAD_LOC PUSH_CONST ADD STORE_LOC JUMP "
          "HALT");

    std::string disasm = disassemble(output.file.code);
    CHECK(disasm.find("0000: LOAD_EXT 1 0") != std::string::npos);
    CHECK(disasm.find("BOUNDS_CHECK 1 10") != std::string::npos);
}

TEST_CASE("wcet composes sequence, branch and loop structure") {
    PerfData unit = uniformPerf(makePlatform(), 0, 1); // overhead 0, every op 1

    // Straight line: 2 + 2 + 1.
    CHECK(wcetOrDie(analyzeOrDie("int8 a;\na = 1;\na = 2;\n"), unit) == 5);

    // Branch: cond(LOAD NOT NOT JIF)=4 + max(then=PUSH+STORE+JUMP=3, else=2+2)=4, +HALT.
    CHECK(wcetOrDie(analyzeOrDie("bool g;\nint8 a;\nif (g) a = 1; else { a = 2; a = 3; }\n"),
                    unit) == 4 + 4 + 1);

    // No else counts zero: 4 + max(2, 0) + HALT. The then arm has no skip jump.
    CHECK(wcetOrDie(analyzeOrDie("bool g;\nint8 a;\nif (g) a = 1;\n"), unit) == 4 + 2 + 1);

    // Loop: init 2 + 3*(test 4 + body 2 + incr 5) + final test 4, + HALT.
    CHECK(wcetOrDie(analyzeOrDie("int8 a;\nlocal int8 i;\nfor (i=1; i<=3; i++) a = 1;\n"),
                    unit) == 2 + 3 * 11 + 4 + 1);

    // Zero-trip loop still pays init and one test.
    CHECK(wcetOrDie(analyzeOrDie("int8 a;\nlocal int8 i;\nfor (i=3; i<=1; i++) a = 1;\n"),
                    unit) == 2 + 4 + 1);

    // Nested: inner loop is the body of the outer one.
    CHECK(wcetOrDie(analyzeOrDie("int8 a;\nlocal int8 i;\nlocal int8 j;\n"
                                 "for (i=1; i<=2; i++) for (j=1; j<=3; j++) a = 1;\n"),
                    unit) == 2 + 2 * (4 + (2 + 3 * 11 + 4) + 5) + 4 + 1);
}

TEST_CASE("reference program wcet is pinned for both cost models") {
    TypedProgram program = analyzeOrDie(kDecisionRuleSource);
    CHECK(wcetOrDie(program, uniformPerf()) == kDecisionRuleWcetUniform);

    // Hand-derived against the slower platform's table:
    //   cond 6 + max(then 5, 3 + 10*(5 + 34 + 7) + 5) + halt 1 + overhead 80
    PerfData slow = uniformPerf(makePlatform("CPU-B", "2"), 80, 1);
    slow.opCosts["LOAD_EXT"] = 3;
    slow.opCosts["STORE_EXT"] = 3;
    slow.opCosts["LOAD_LOC"] = 2;
    slow.opCosts["STORE_LOC"] = 2;
    slow.opCosts["LOAD_EXT_DYN"] = 4;
    slow.opCosts["STORE_EXT_DYN"] = 4;
    slow.opCosts["MUL"] = 2;
    slow.opCosts["DIV"] = 6;
    slow.opCosts["BOUNDS_CHECK"] = 2;
    CHECK(wcetOrDie(program, slow) == 555);
}

TEST_CASE("wcet arithmetic overflow is an error, not a wrap") {
    TypedProgram program = analyzeOrDie(
        "int8 a;\nlocal int32 i;\nlocal int32 j;\n"
        "for (i=1; i<=2000000000; i++) for (j=1; j<=2000000000; j++) a = 1;\n");
    VariableLayout layout = layoutVariables(program);
    CodegenResult generated = generateOrDie(program, layout);
    PerfData costly = uniformPerf(makePlatform(), 0, 1000000);
    auto wcet = computeWcet(generated.code, generated.map, costly);
    REQUIRE(!wcet.ok());
    CHECK(wcet.error().kind == WcetError::Overflow);
}

TEST_CASE("expressions deeper than the operand stack are rejected") {
    // Through the text pipeline the parser's recursion guard fires first:
    // nesting deep enough to threaten the operand stack never parses.
    std::string nested = "int32 x;\nx = ";
    for (int k = 0; k < 70; k++) nested += "1 + (";
    nested += "1";
    for (int k = 0; k < 70; k++) nested += ")";
    nested += ";\n";
    AnalyzeResult rejected = analyzeSource(nested);
    REQUIRE(!rejected.ok());
    CHECK(rejected.diags.front().code == DiagCode::ParseError);

    // Operator chains without parentheses associate iteratively, so any
    // practical length compiles with constant operand depth.
    std::string wide = "int32 x;\nx = 1";
    for (int k = 0; k < 500; k++) wide += " + 1";
    wide += ";\n";
    TypedProgram program = analyzeOrDie(wide);
    CHECK(generateCode(program, layoutVariables(program)).ok());

    // The generator's own depth backstop covers ASTs that never went
    // through the parser. A right-leaning chain of 70 additions needs 71
    // operand slots, past the 64-entry stack.
    Ast ast;
    VarDecl decl;
    decl.name = "x";
    decl.type.elem = ScalarKind::Int32;
    ast.decls.push_back(decl);

    auto lit = [] {
        auto e = std::make_unique<Expr>();
        e->node = IntLitExpr{1};
        return e;
    };
    ExprPtr chain = lit();
    for (int k = 0; k < 70; k++) {
        auto parent = std::make_unique<Expr>();
        parent->node = BinaryExpr{BinaryOp::Add, lit(), std::move(chain)};
        chain = std::move(parent);
    }
    AssignStmt assign;
    assign.target.name = "x";
    assign.value = std::move(chain);
    auto stmt = std::make_unique<Stmt>();
    stmt->node = std::move(assign);
    ast.stmts.push_back(std::move(stmt));

    AnalyzeResult analyzed = analyze(std::move(ast));
    REQUIRE(analyzed.ok());
    VariableLayout layout = layoutVariables(*analyzed.program);
    auto generated = generateCode(*analyzed.program, layout);
    REQUIRE(!generated.ok());
    CHECK(generated.error().kind == CodegenError::ExpressionTooDeep);
}

TEST_CASE("compile validates the perf set") {
    auto empty = compile("int8 a;\na = 1;\n", {});
    REQUIRE(!empty.ok());
    CHECK(empty.error().message.find("EmptyPerfSet") != std::string::npos);

    auto duplicate = compile("int8 a;\na = 1;\n", {uniformPerf(), uniformPerf()});
    REQUIRE(!duplicate.ok());
    CHECK(duplicate.error().message.find("DuplicatePlatformType") != std::string::npos);

    auto bad = compile("a = 1;\n", {uniformPerf()});
    REQUIRE(!bad.ok());
    REQUIRE(!bad.error().diags.empty());
    CHECK(bad.error().diags.front().code == DiagCode::UndeclaredIdentifier);
}

TEST_CASE("compile output is deterministic and internally consistent") {
    std::vector<PerfData> perfSet = {uniformPerf(makePlatform("CPU-A", "1")),
                                     uniformPerf(makePlatform("CPU-B", "2"), 80, 2)};
    CompileOutput first = compileOrDie(kDecisionRuleSource, perfSet);
    CompileOutput second = compileOrDie(kDecisionRuleSource, perfSet);

    auto firstBytes = serialize(first.file);
    auto secondBytes = serialize(second.file);
    REQUIRE(firstBytes.ok());
    REQUIRE(secondBytes.ok());
    CHECK(firstBytes.value() == secondBytes.value());

    const Header &header = first.file.header;
    CHECK(header.formatVersion == kFormatVersion);
    CHECK(header.compilerType == kCompilerType);
    CHECK(header.compilerVersion == kCompilerVersion);
    CHECK(header.macroCodeLength == first.file.code.byteLength);
    CHECK(header.externalVarSize == kDecisionRuleExternalBytes);
    CHECK(header.localVarSize == kDecisionRuleLocalBytes);
    CHECK(header.platformTypeCount == 2);
    CHECK(header.contentChecksum == contentChecksum(first.file));

    // Table order follows perf set order.
    REQUIRE(first.file.table.entries.size() == 2);
    CHECK(first.file.table.entries[0].platform.identity() == "CPU-A/1/RTOS/3/1.0");
    CHECK(first.file.table.entries[1].platform.identity() == "CPU-B/2/RTOS/3/1.0");
    CHECK(first.file.table.find("CPU-B/2/RTOS/3/1.0") == 1);
    CHECK(first.file.table.find("CPU-C/1/RTOS/3/1.0") == -1);
}
