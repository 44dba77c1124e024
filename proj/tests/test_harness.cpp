// External-variable binding and the rack-manager scenario driver.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "macrocell/harness.hpp"
#include "macrocell/layout.hpp"
#include "macrocell/layout_io.hpp"
#include "support/fixtures.hpp"

#include <cstring>
#include <string>
#include <vector>

using namespace macrocell;
using namespace macrocell::testing;

namespace {

ExternalBinding referenceBinding() {
    TypedProgram program = analyzeOrDie(kDecisionRuleSource);
    VariableLayout layout = layoutVariables(program);
    return ExternalBinding::fromProgram(program, layout);
}

} // namespace

TEST_CASE("the embedded scenario source matches the reference text") {
    CHECK(std::string(rackManagerSource()) == kDecisionRuleSource);
}

TEST_CASE("paths bind to pinned byte positions") {
    ExternalBinding binding = referenceBinding();
    REQUIRE(binding.regionSize() == kDecisionRuleExternalBytes);

    CHECK(!binding.writeVar("ground", 1).has_value());
    CHECK(binding.data()[0] == 1);

    CHECK(!binding.writeVar("calculator[1].criticity", 7).has_value());
    CHECK(binding.data()[2] == 7);

    CHECK(!binding.writeVar("calculator[10].powered", 1).has_value());
    CHECK(binding.data()[19] == 1);

    CHECK(!binding.writeVar("calculator[2].powered", 1).has_value());
    CHECK(binding.data()[3] == 1);

    auto read = binding.readVar("calculator[1].criticity");
    REQUIRE(read.ok());
    CHECK(read.value() == 7);
}

TEST_CASE("reads sign-extend and bools canonicalize") {
    ExternalBinding binding = referenceBinding();
    binding.data()[2] = 0xFF; // calculator[1].criticity as raw byte
    auto negative = binding.readVar("calculator[1].criticity");
    REQUIRE(negative.ok());
    CHECK(negative.value() == -1);

    binding.data()[0] = 2; // non-canonical bool byte
    auto ground = binding.readVar("ground");
    REQUIRE(ground.ok());
    CHECK(ground.value() == 1);

    auto kind = binding.scalarKind("ground");
    REQUIRE(kind.ok());
    CHECK(kind.value() == ScalarKind::Bool);
    auto intKind = binding.scalarKind("calculator[3].criticity");
    REQUIRE(intKind.ok());
    CHECK(intKind.value() == ScalarKind::Int8);
}

TEST_CASE("writes are range-checked per declared type") {
    ExternalBinding binding = referenceBinding();
    auto tooBig = binding.writeVar("calculator[1].criticity", 128);
    REQUIRE(tooBig.has_value());
    CHECK(tooBig->kind == ExternalBinding::AccessError::Kind::ValueOverflow);
    auto tooSmall = binding.writeVar("calculator[1].criticity", -129);
    REQUIRE(tooSmall.has_value());
    CHECK(tooSmall->kind == ExternalBinding::AccessError::Kind::ValueOverflow);
    auto boolRange = binding.writeVar("ground", 2);
    REQUIRE(boolRange.has_value());
    CHECK(boolRange->kind == ExternalBinding::AccessError::Kind::ValueOverflow);
    CHECK(!binding.writeVar("calculator[1].criticity", -128).has_value());
    CHECK(!binding.writeVar("calculator[1].criticity", 127).has_value());
}

TEST_CASE("path faults are reported by kind") {
    using Kind = ExternalBinding::AccessError::Kind;
    ExternalBinding binding = referenceBinding();
    auto kindOf = [&](std::string_view path) {
        auto result = binding.readVar(path);
        REQUIRE(!result.ok());
        return result.error().kind;
    };
    CHECK(kindOf("altitude") == Kind::UnknownPath);
    CHECK(kindOf("calculator") == Kind::UnknownPath);          // missing index
    CHECK(kindOf("calculator[3]") == Kind::UnknownPath);       // missing field
    CHECK(kindOf("calculator[3].charge") == Kind::UnknownPath);
    CHECK(kindOf("ground[1]") == Kind::UnknownPath);           // not an array
    CHECK(kindOf("ground.bit") == Kind::UnknownPath);          // no fields
    CHECK(kindOf("calculator[0].powered") == Kind::IndexOutOfDeclaredRange);
    CHECK(kindOf("calculator[11].powered") == Kind::IndexOutOfDeclaredRange);
    CHECK(kindOf("i") == Kind::LocalVar);
    CHECK(kindOf("calculator[") == Kind::UnknownPath);         // unparsable
}

TEST_CASE("vars files apply in order and stop at the first fault") {
    ExternalBinding binding = referenceBinding();
    auto fault = binding.applyVarsFile("# inputs\nground = true\n\n"
                                       "calculator[2].criticity = -3\n");
    CHECK(!fault.has_value());
    CHECK(binding.readVar("ground").value() == 1);
    CHECK(binding.readVar("calculator[2].criticity").value() == -3);

    auto badPath = binding.applyVarsFile("engine = 1\n");
    REQUIRE(badPath.has_value());
    auto badValue = binding.applyVarsFile("ground = maybe\n");
    REQUIRE(badValue.has_value());
    auto noEquals = binding.applyVarsFile("ground true\n");
    REQUIRE(noEquals.has_value());
}

TEST_CASE("scalar paths enumerate the region in layout order") {
    ExternalBinding binding = referenceBinding();
    std::vector<std::string> paths = binding.scalarPaths();
    REQUIRE(paths.size() == 21);
    CHECK(paths[0] == "ground");
    CHECK(paths[1] == "calculator[1].powered");
    CHECK(paths[2] == "calculator[1].criticity");
    CHECK(paths[19] == "calculator[10].powered");
    CHECK(paths[20] == "calculator[10].criticity");
}

TEST_CASE("a layout sidecar reproduces the program binding") {
    TypedProgram program = analyzeOrDie(kDecisionRuleSource);
    VariableLayout layout = layoutVariables(program);
    auto parsed = parseLayoutFile(emitLayoutFile(program, layout));
    REQUIRE(parsed.ok());
    ExternalBinding fromSidecar = ExternalBinding::fromLayoutFile(parsed.value());
    ExternalBinding fromSource = ExternalBinding::fromProgram(program, layout);

    CHECK(fromSidecar.regionSize() == fromSource.regionSize());
    CHECK(fromSidecar.scalarPaths() == fromSource.scalarPaths());
    CHECK(!fromSidecar.writeVar("calculator[4].criticity", 9).has_value());
    CHECK(!fromSource.writeVar("calculator[4].criticity", 9).has_value());
    CHECK(std::memcmp(fromSidecar.data(), fromSource.data(), fromSource.regionSize()) == 0);
    auto localErr = fromSidecar.readVar("i");
    REQUIRE(!localErr.ok());
    CHECK(localErr.error().kind == ExternalBinding::AccessError::Kind::LocalVar);
}

TEST_CASE("the scenario driver reports a faithful run") {
    RackScenarioInput input;
    input.perfSet = {uniformPerf()};
    input.container = ContainerConfig{uniformPerf(), 1 << 16, 8};
    input.allocatedTime = 1000;
    input.ground = false;
    for (int k = 0; k < 10; k++)
        input.calculators.push_back(CalculatorState{true, int8_t(k)}); // 0..4 stop

    ScenarioResult result = runRackManagerScenario(input);
    CHECK(result.passed);
    CHECK(result.report.find("decision rule honored") != std::string::npos);
    REQUIRE(result.trace.size() >= 2);
    CHECK(result.trace[0].kind == "init");
    CHECK(result.trace[0].detail.find("status=OK") != std::string::npos);
    CHECK(result.trace[1].kind == "exec");
    CHECK(result.trace[1].detail.find("status=OK") != std::string::npos);
}

TEST_CASE("the scenario driver rejects malformed input") {
    RackScenarioInput input;
    input.perfSet = {uniformPerf()};
    input.container = ContainerConfig{uniformPerf(), 1 << 16, 8};
    input.allocatedTime = 1000;
    input.ground = true;
    input.calculators.resize(3, CalculatorState{true, 5});
    ScenarioResult result = runRackManagerScenario(input);
    CHECK(!result.passed);
}

TEST_CASE("the scenario driver surfaces protocol failures") {
    RackScenarioInput input;
    input.perfSet = {uniformPerf()};
    input.container = ContainerConfig{uniformPerf(), 1 << 16, 8};
    input.allocatedTime = 100; // below the 371 the table demands
    input.ground = true;
    input.calculators.resize(10, CalculatorState{true, 5});
    ScenarioResult result = runRackManagerScenario(input);
    CHECK(!result.passed);
    CHECK(result.report.find("ERR_WCET_EXCEEDS_ALLOCATION") != std::string::npos);
}
