#include "support/fixtures.hpp"

#include "macrocell/diag.hpp"
#include "macrocell/sema.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace macrocell::testing {

const char *const kDecisionRuleSource = R"(// Decision rule to stop calculators
// v1.0

//--- External Variables
bool ground;
struct
{
    bool powered;
    int8 criticity;
}
calculator[1..10];

//--- Local Variables
local int8 i;

//--- Decision Logic
if (ground)
{
    calculator[1].powered = false;
}
else
{
    for (i=1; i<=10; i++)
        if (calculator[i].criticity < 5)
            calculator[i].powered = false;
}
)";

PlatformType makePlatform(std::string hardwareType, std::string hardwareVersion) {
    return PlatformType{std::move(hardwareType), std::move(hardwareVersion), "RTOS", "3", "1.0"};
}

PerfData uniformPerf(PlatformType platform, uint64_t overhead, uint64_t cost) {
    PerfData perf;
    perf.platform = std::move(platform);
    perf.requestOverhead = overhead;
    for (const OpInfo &info : opTable()) perf.opCosts[info.mnemonic] = cost;
    return perf;
}

std::string perfText(const PerfData &perf) {
    std::ostringstream out;
    out << "platform.hardware_type = " << perf.platform.hardwareType << '\n';
    out << "platform.hardware_version = " << perf.platform.hardwareVersion << '\n';
    out << "platform.os_type = " << perf.platform.osType << '\n';
    out << "platform.os_version = " << perf.platform.osVersion << '\n';
    out << "platform.container_version = " << perf.platform.containerVersion << '\n';
    out << "overhead.request = " << perf.requestOverhead << '\n';
    for (const auto &[mnemonic, cost] : perf.opCosts)
        out << "op." << mnemonic << " = " << cost << '\n';
    return out.str();
}

CompileOutput compileOrDie(std::string_view source, const std::vector<PerfData> &perfSet) {
    auto result = compile(source, perfSet);
    if (!result.ok()) {
        std::fprintf(stderr, "fixture compile failed: %s\n", result.error().message.c_str());
        for (const Diagnostic &diag : result.error().diags)
            std::fprintf(stderr, "%s\n", formatDiagnostic("<fixture>", diag).c_str());
        std::abort();
    }
    return std::move(result.value());
}

TypedProgram analyzeOrDie(std::string_view source) {
    AnalyzeResult result = analyzeSource(source);
    if (!result.ok()) {
        for (const Diagnostic &diag : result.diags)
            std::fprintf(stderr, "%s\n", formatDiagnostic("<fixture>", diag).c_str());
        std::abort();
    }
    return std::move(*result.program);
}

} // namespace macrocell::testing
