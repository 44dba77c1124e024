// End-to-end checks of the command-line tool via subprocesses.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/fixtures.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace macrocell;
using namespace macrocell::testing;

namespace {

struct CliResult {
    int exitCode;
    std::string output; // stdout and stderr combined
};

CliResult runCli(const std::string &args) {
    std::string command = std::string(MACROCELL_CLI_PATH) + " " + args + " 2>&1";
    FILE *pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buffer;
    size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        output.append(buffer.data(), got);
    int status = pclose(pipe);
    int exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return CliResult{exitCode, std::move(output)};
}

// Scratch directory shared by the whole binary; contents are recreated by
// each case that needs them.
struct Workspace {
    std::string dir;

    Workspace()
    {
        char name[] = "/tmp/macrocell-cli-XXXXXX";
        REQUIRE(mkdtemp(name) != nullptr);
        dir = name;
    }

    std::string path(const std::string &leaf) const { return dir + "/" + leaf; }

    void write(const std::string &leaf, const std::string &content) const
    {
        std::ofstream out(path(leaf), std::ios::binary);
        REQUIRE(out.good());
        out << content;
    }

    std::string read(const std::string &leaf) const
    {
        std::ifstream in(path(leaf), std::ios::binary);
        REQUIRE(in.good());
        return std::string(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
    }
};

const Workspace &workspace() {
    static Workspace shared;
    return shared;
}

// Compiles the reference program into the workspace, returning the .mcf path.
std::string compiledReference() {
    const Workspace &ws = workspace();
    ws.write("rule.adp", kDecisionRuleSource);
    ws.write("cpu_a.epd", perfText(uniformPerf()));
    CliResult compile = runCli("compile " + ws.path("rule.adp") + " --perf " +
                               ws.path("cpu_a.epd") + " -o " + ws.path("rule.mcf") +
                               " --layout " + ws.path("rule.layout"));
    REQUIRE(compile.exitCode == 0);
    return ws.path("rule.mcf");
}

} // namespace

TEST_CASE("compile reports sizes, platforms and the wcet table") {
    const Workspace &ws = workspace();
    ws.write("rule.adp", kDecisionRuleSource);
    ws.write("cpu_a.epd", perfText(uniformPerf()));
    PerfData slow = uniformPerf(makePlatform("CPU-B", "2"), 80, 2);
    ws.write("cpu_b.epd", perfText(slow));

    CliResult result = runCli("compile " + ws.path("rule.adp") + " --perf " +
                              ws.path("cpu_a.epd") + " --perf " + ws.path("cpu_b.epd") +
                              " -o " + ws.path("rule.mcf") + " --layout " +
                              ws.path("rule.layout"));
    CHECK(result.exitCode == 0);
    CHECK(result.output.find("code: 197 B") != std::string::npos);
    CHECK(result.output.find("external: 21 B") != std::string::npos);
    CHECK(result.output.find("local: 1 B") != std::string::npos);
    CHECK(result.output.find("platforms: 2") != std::string::npos);
    CHECK(result.output.find("wcet CPU-A/1/RTOS/3/1.0: 371") != std::string::npos);

    std::string layout = ws.read("rule.layout");
    CHECK(layout.find("external ground offset=0 size=1 type=bool") != std::string::npos);
    CHECK(layout.find("external_total 21") != std::string::npos);
}

TEST_CASE("compilation is deterministic at the byte level") {
    const Workspace &ws = workspace();
    ws.write("rule.adp", kDecisionRuleSource);
    ws.write("cpu_a.epd", perfText(uniformPerf()));
    std::string base = "compile " + ws.path("rule.adp") + " --perf " + ws.path("cpu_a.epd");
    REQUIRE(runCli(base + " -o " + ws.path("one.mcf")).exitCode == 0);
    REQUIRE(runCli(base + " -o " + ws.path("two.mcf")).exitCode == 0);
    CHECK(ws.read("one.mcf") == ws.read("two.mcf"));
}

TEST_CASE("compile diagnostics carry positions and codes") {
    const Workspace &ws = workspace();
    ws.write("bad.adp", "int8 a;\na = b;\n");
    ws.write("cpu_a.epd", perfText(uniformPerf()));
    CliResult result = runCli("compile " + ws.path("bad.adp") + " --perf " +
                              ws.path("cpu_a.epd") + " -o " + ws.path("bad.mcf"));
    CHECK(result.exitCode == 2);
    CHECK(result.output.find("bad.adp:2:5: error:") != std::string::npos);
    CHECK(result.output.find("[UndeclaredIdentifier]") != std::string::npos);
}

TEST_CASE("missing required arguments exit with usage") {
    CHECK(runCli("compile").exitCode == 1);
    CHECK(runCli("").exitCode == 1);
    CHECK(runCli("frobnicate x").exitCode == 1);
}

TEST_CASE("inspect prints the header and the platform table") {
    std::string mcf = compiledReference();
    CliResult result = runCli("inspect " + mcf);
    CHECK(result.exitCode == 0);
    CHECK(result.output.find("formatVersion: 1") != std::string::npos);
    CHECK(result.output.find("compilerType: macrocell") != std::string::npos);
    CHECK(result.output.find("macroCodeLength: 197") != std::string::npos);
    CHECK(result.output.find("externalVarSize: 21") != std::string::npos);
    CHECK(result.output.find("localVarSize: 1") != std::string::npos);
    CHECK(result.output.find("platformTypeCount: 1") != std::string::npos);
    CHECK(result.output.find("platform CPU-A/1/RTOS/3/1.0: wcet=371") != std::string::npos);
    CHECK(result.output.find("LOAD_EXT") == std::string::npos); // no disasm by default

    CliResult disasm = runCli("inspect " + mcf + " --disasm");
    CHECK(disasm.exitCode == 0);
    CHECK(disasm.output.find("0000: LOAD_EXT 1 0") != std::string::npos);
    CHECK(disasm.output.find("BOUNDS_CHECK 1 10") != std::string::npos);

    CliResult truncated = runCli("inspect /dev/null");
    CHECK(truncated.exitCode == 2);
}

TEST_CASE("run executes the decision rule against a vars file") {
    const Workspace &ws = workspace();
    std::string mcf = compiledReference();
    ws.write("mixed.vars",
             "ground = false\n"
             "calculator[1].powered = true\ncalculator[1].criticity = 3\n"
             "calculator[2].powered = true\ncalculator[2].criticity = 7\n"
             "calculator[3].powered = true\ncalculator[3].criticity = 4\n"
             "calculator[4].powered = true\ncalculator[4].criticity = 9\n"
             "calculator[5].powered = true\ncalculator[5].criticity = 2\n"
             "calculator[6].powered = true\ncalculator[6].criticity = 5\n"
             "calculator[7].powered = true\ncalculator[7].criticity = 6\n"
             "calculator[8].powered = true\ncalculator[8].criticity = 1\n"
             "calculator[9].powered = true\ncalculator[9].criticity = 8\n"
             "calculator[10].powered = true\ncalculator[10].criticity = 4\n");

    std::string base = "run " + mcf + " --perf " + workspace().path("cpu_a.epd") +
                       " --budget 65536 --max-platforms 8 --allocated-time 1000";

    CliResult result = runCli(base + " --vars " + ws.path("mixed.vars") + " --layout " +
                              ws.path("rule.layout") + " --dump-vars");
    CHECK(result.exitCode == 0);
    CHECK(result.output.find("init: OK") != std::string::npos);
    CHECK(result.output.find("contextId: 1") != std::string::npos);
    CHECK(result.output.find("exec: OK") != std::string::npos);
    CHECK(result.output.find("fuel: 271") != std::string::npos);
    for (int stopped : {1, 3, 5, 8, 10})
        CHECK(result.output.find("calculator[" + std::to_string(stopped) +
                                 "].powered = false") != std::string::npos);
    for (int running : {2, 4, 6, 7, 9})
        CHECK(result.output.find("calculator[" + std::to_string(running) +
                                 "].powered = true") != std::string::npos);

    // Binding straight from source instead of the sidecar.
    CliResult fromSrc = runCli(base + " --vars " + ws.path("mixed.vars") + " --src " +
                               ws.path("rule.adp"));
    CHECK(fromSrc.exitCode == 0);
    CHECK(fromSrc.output.find("exec: OK") != std::string::npos);

    // Without any binding the region is zeroed: ground=false and every
    // criticity reads 0, so the loop powers nothing off; vars need binding.
    CliResult bare = runCli("run " + mcf + " --perf " + workspace().path("cpu_a.epd") +
                            " --budget 65536 --max-platforms 8 --allocated-time 1000");
    CHECK(bare.exitCode == 0);
    CliResult varsNoBinding = runCli(base + " --vars " + ws.path("mixed.vars"));
    CHECK(varsNoBinding.exitCode == 1);
}

TEST_CASE("run distinguishes admission failures from traps") {
    std::string mcf = compiledReference();
    const Workspace &ws = workspace();

    CliResult rejected = runCli("run " + mcf + " --perf " + ws.path("cpu_a.epd") +
                                " --budget 65536 --max-platforms 8 --allocated-time 100");
    CHECK(rejected.exitCode == 3);
    CHECK(rejected.output.find("init: ERR_WCET_EXCEEDS_ALLOCATION") != std::string::npos);

    ws.write("div.adp", "int32 a;\nint32 b;\na = 10 / b;\n");
    REQUIRE(runCli("compile " + ws.path("div.adp") + " --perf " + ws.path("cpu_a.epd") +
                   " -o " + ws.path("div.mcf"))
                .exitCode == 0);
    CliResult trapped = runCli("run " + ws.path("div.mcf") + " --perf " + ws.path("cpu_a.epd") +
                               " --budget 65536 --max-platforms 8 --allocated-time 1000");
    CHECK(trapped.exitCode == 4);
    CHECK(trapped.output.find("exec: DIV_BY_ZERO") != std::string::npos);
}

TEST_CASE("wcet lists table rows and filters by platform") {
    std::string mcf = compiledReference();
    CliResult all = runCli("wcet " + mcf);
    CHECK(all.exitCode == 0);
    CHECK(all.output.find("CPU-A/1/RTOS/3/1.0: 371") != std::string::npos);

    CliResult hit = runCli("wcet " + mcf + " --platform CPU-A/1/RTOS/3/1.0");
    CHECK(hit.exitCode == 0);
    CHECK(hit.output.find("371") != std::string::npos);

    CliResult miss = runCli("wcet " + mcf + " --platform CPU-Z/9/RTOS/3/1.0");
    CHECK(miss.exitCode == 2);
}

TEST_CASE("a program with no statements disassembles to a lone halt") {
    const Workspace &ws = workspace();
    ws.write("empty.adp", "bool unused;\n");
    ws.write("cpu_a.epd", perfText(uniformPerf()));
    REQUIRE(runCli("compile " + ws.path("empty.adp") + " --perf " + ws.path("cpu_a.epd") +
                   " -o " + ws.path("empty.mcf"))
                .exitCode == 0);
    CliResult result = runCli("inspect " + ws.path("empty.mcf") + " --disasm");
    CHECK(result.exitCode == 0);
    CHECK(result.output.find("0000: HALT") != std::string::npos);
    CHECK(result.output.find("macroCodeLength: 1") != std::string::npos);
}
