// macrocell - command line front end for the macro-compiler toolchain.
//
// Exit codes: 0 success, 1 usage error, 2 compile/file error,
// 3 container initialization error, 4 runtime trap.

#include "macrocell/binfmt.hpp"
#include "macrocell/compiler.hpp"
#include "macrocell/container.hpp"
#include "macrocell/harness.hpp"
#include "macrocell/layout_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace macrocell;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCompile = 2;
constexpr int kExitInit = 3;
constexpr int kExitTrap = 4;

std::optional<std::string> readFile(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::optional<std::vector<uint8_t>> readBinaryFile(const std::string &path) {
    auto text = readFile(path);
    if (!text) return std::nullopt;
    return std::vector<uint8_t>(text->begin(), text->end());
}

bool writeFile(const std::string &path, std::span<const uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return bool(out);
}

// Loads and validates one .epd file, or reports and returns nullopt.
std::optional<PerfData> loadPerf(const std::string &path) {
    auto text = readFile(path);
    if (!text) {
        std::cerr << "error: cannot read " << path << '\n';
        return std::nullopt;
    }
    auto perf = parsePerfData(*text);
    if (!perf.ok()) {
        std::cerr << "error: " << path << ": " << perfErrorName(perf.error().kind) << " "
                  << perf.error().detail;
        if (perf.error().line > 0) std::cerr << " (line " << perf.error().line << ")";
        std::cerr << '\n';
        return std::nullopt;
    }
    return std::move(perf.value());
}

int cmdCompile(const std::string &srcPath, const std::vector<std::string> &perfPaths,
               const std::string &outPath, const std::string &layoutPath) {
    auto source = readFile(srcPath);
    if (!source) {
        std::cerr << "error: cannot read " << srcPath << '\n';
        return kExitCompile;
    }
    std::vector<PerfData> perfSet;
    for (const std::string &path : perfPaths) {
        auto perf = loadPerf(path);
        if (!perf) return kExitCompile;
        perfSet.push_back(std::move(*perf));
    }

    auto compiled = compile(*source, perfSet);
    if (!compiled.ok()) {
        for (const Diagnostic &diag : compiled.error().diags)
            std::cerr << formatDiagnostic(srcPath, diag) << '\n';
        if (compiled.error().diags.empty())
            std::cerr << "error: " << compiled.error().message << '\n';
        return kExitCompile;
    }
    CompileOutput &output = compiled.value();

    auto bytes = serialize(output.file);
    if (!bytes.ok()) {
        std::cerr << "error: " << binErrorName(bytes.error().kind) << ": "
                  << bytes.error().detail << '\n';
        return kExitCompile;
    }
    if (!writeFile(outPath, bytes.value())) {
        std::cerr << "error: cannot write " << outPath << '\n';
        return kExitCompile;
    }

    if (!layoutPath.empty()) {
        std::string sidecar = emitLayoutFile(output.program, output.layout);
        if (!writeFile(layoutPath, std::span(reinterpret_cast<const uint8_t *>(sidecar.data()),
                                             sidecar.size()))) {
            std::cerr << "error: cannot write " << layoutPath << '\n';
            return kExitCompile;
        }
        std::cout << "layout: " << layoutPath << '\n';
    }

    std::cout << "output: " << outPath << '\n';
    std::cout << "code: " << output.file.header.macroCodeLength << " B\n";
    std::cout << "external: " << output.file.header.externalVarSize << " B\n";
    std::cout << "local: " << output.file.header.localVarSize << " B\n";
    std::cout << "platforms: " << output.file.header.platformTypeCount << '\n';
    for (const PlatformEntry &entry : output.file.table.entries)
        std::cout << "wcet " << entry.platform.identity() << ": " << entry.wcet << '\n';
    return kExitOk;
}

int cmdInspect(const std::string &filePath, bool disasm) {
    auto bytes = readBinaryFile(filePath);
    if (!bytes) {
        std::cerr << "error: cannot read " << filePath << '\n';
        return kExitCompile;
    }
    auto parsed = deserialize(*bytes);
    if (!parsed.ok()) {
        std::cerr << "error: " << binErrorName(parsed.error().kind) << ": "
                  << parsed.error().detail << '\n';
        return kExitCompile;
    }
    const CompiledFile &file = parsed.value();

    std::cout << "formatVersion: " << file.header.formatVersion << '\n';
    std::cout << "compilerType: " << file.header.compilerType << '\n';
    std::cout << "compilerVersion: " << file.header.compilerVersion << '\n';
    std::cout << "macroCodeLength: " << file.header.macroCodeLength << '\n';
    std::cout << "externalVarSize: " << file.header.externalVarSize << '\n';
    std::cout << "localVarSize: " << file.header.localVarSize << '\n';
    std::cout << "platformTypeCount: " << file.header.platformTypeCount << '\n';
    std::cout << "contentChecksum: " << file.header.contentChecksum << '\n';
    for (const PlatformEntry &entry : file.table.entries)
        std::cout << "platform " << entry.platform.identity() << ": wcet=" << entry.wcet
                  << '\n';
    if (disasm) std::cout << disassemble(file.code);
    return kExitOk;
}

int cmdWcet(const std::string &filePath, const std::string &platform) {
    auto bytes = readBinaryFile(filePath);
    if (!bytes) {
        std::cerr << "error: cannot read " << filePath << '\n';
        return kExitCompile;
    }
    auto parsed = deserialize(*bytes);
    if (!parsed.ok()) {
        std::cerr << "error: " << binErrorName(parsed.error().kind) << ": "
                  << parsed.error().detail << '\n';
        return kExitCompile;
    }
    const WcetTable &table = parsed.value().table;

    if (!platform.empty()) {
        int index = table.find(platform);
        if (index < 0) {
            std::cerr << "error: platform " << platform << " is not in the table\n";
            return kExitCompile;
        }
        std::cout << platform << ": " << table.entries[size_t(index)].wcet << '\n';
        return kExitOk;
    }
    for (const PlatformEntry &entry : table.entries)
        std::cout << entry.platform.identity() << ": " << entry.wcet << '\n';
    return kExitOk;
}

int cmdRun(const std::string &filePath, const std::string &perfPath, uint64_t budget,
           uint32_t maxPlatforms, uint64_t allocatedTime, const std::string &varsPath,
           const std::string &srcPath, const std::string &layoutPath, bool dumpVars) {
    auto bytes = readBinaryFile(filePath);
    if (!bytes) {
        std::cerr << "error: cannot read " << filePath << '\n';
        return kExitCompile;
    }
    auto perf = loadPerf(perfPath);
    if (!perf) return kExitCompile;

    // Variable binding: from the source (re-laying it out) or from a
    // layout sidecar. Without one, the region is sized from the header and
    // variables cannot be addressed by name.
    std::optional<ExternalBinding> binding;
    if (!srcPath.empty()) {
        auto source = readFile(srcPath);
        if (!source) {
            std::cerr << "error: cannot read " << srcPath << '\n';
            return kExitCompile;
        }
        AnalyzeResult analyzed = analyzeSource(*source);
        if (!analyzed.ok()) {
            for (const Diagnostic &diag : analyzed.diags)
                std::cerr << formatDiagnostic(srcPath, diag) << '\n';
            return kExitCompile;
        }
        VariableLayout layout = layoutVariables(*analyzed.program);
        binding = ExternalBinding::fromProgram(*analyzed.program, layout);
    } else if (!layoutPath.empty()) {
        auto text = readFile(layoutPath);
        if (!text) {
            std::cerr << "error: cannot read " << layoutPath << '\n';
            return kExitCompile;
        }
        auto layout = parseLayoutFile(*text);
        if (!layout.ok()) {
            std::cerr << "error: " << layoutPath << ":" << layout.error().line << ": "
                      << layout.error().message << '\n';
            return kExitCompile;
        }
        binding = ExternalBinding::fromLayoutFile(layout.value());
    } else if (!varsPath.empty() || dumpVars) {
        std::cerr << "error: --vars and --dump-vars need --src or --layout\n";
        return kExitUsage;
    }

    std::vector<uint8_t> plainRegion;
    ExternalRegion region;
    if (binding) {
        region = binding->region();
    } else {
        auto header = parseHeaderOnly(*bytes);
        if (!header.ok()) {
            std::cerr << "error: " << binErrorName(header.error().kind) << ": "
                      << header.error().detail << '\n';
            return kExitCompile;
        }
        plainRegion.assign(header.value().externalVarSize, 0);
        region = ExternalRegion(std::span(plainRegion));
    }

    if (!varsPath.empty()) {
        auto text = readFile(varsPath);
        if (!text) {
            std::cerr << "error: cannot read " << varsPath << '\n';
            return kExitCompile;
        }
        if (auto err = binding->applyVarsFile(*text)) {
            std::cerr << "error: " << varsPath << ": " << *err << '\n';
            return kExitCompile;
        }
    }

    Container container(ContainerConfig{std::move(*perf), budget, maxPlatforms});
    auto stored = std::make_shared<const std::vector<uint8_t>>(std::move(*bytes));
    InitResponse init = container.initialize(InitRequest{stored, region, allocatedTime});
    std::cout << "init: " << initStatusName(init.status) << '\n';
    if (init.status != InitStatus::Ok) return kExitInit;
    std::cout << "contextId: " << init.contextId << '\n';

    ExecResponse exec = container.execute(ExecRequest{init.contextId});
    std::cout << "exec: " << execStatusName(exec.status) << '\n';
    std::cout << "fuel: " << exec.fuelConsumed << '\n';

    if (dumpVars) {
        // Bools render as true/false, so the dump reloads as a .vars file.
        for (const std::string &path : binding->scalarPaths()) {
            auto value = binding->readVar(path);
            auto kind = binding->scalarKind(path);
            if (!value.ok() || !kind.ok()) continue;
            std::cout << path << " = ";
            if (kind.value() == ScalarKind::Bool)
                std::cout << (value.value() != 0 ? "true" : "false") << '\n';
            else
                std::cout << value.value() << '\n';
        }
    }
    return exec.status == ExecStatus::Ok ? kExitOk : kExitTrap;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"macro-compiler toolchain: compile, inspect, run, wcet"};
    app.require_subcommand(1);

    std::string srcPath, outPath, layoutOut;
    std::vector<std::string> perfPaths;
    auto *compileCmd = app.add_subcommand("compile", "compile adaptation source");
    compileCmd->add_option("src", srcPath, "adaptation source file (.adp)")->required();
    compileCmd->add_option("--perf", perfPaths, "performance data file (.epd)")->required();
    compileCmd->add_option("-o,--output", outPath, "compiled file to write (.mcf)")->required();
    compileCmd->add_option("--layout", layoutOut, "layout sidecar to write (.layout)");

    std::string inspectPath;
    bool disasm = false;
    auto *inspectCmd = app.add_subcommand("inspect", "print header and platform table");
    inspectCmd->add_option("file", inspectPath, "compiled file (.mcf)")->required();
    inspectCmd->add_flag("--disasm", disasm, "disassemble the macro-code");

    std::string runFile, runPerf, runVars, runSrc, runLayout;
    uint64_t budget = 0;
    uint32_t maxPlatforms = 0;
    uint64_t allocatedTime = 0;
    bool dumpVars = false;
    auto *runCmd = app.add_subcommand("run", "initialize and execute in a container");
    runCmd->add_option("file", runFile, "compiled file (.mcf)")->required();
    runCmd->add_option("--perf", runPerf, "container platform perf data (.epd)")->required();
    runCmd->add_option("--budget", budget, "container memory budget in bytes")->required();
    runCmd->add_option("--max-platforms", maxPlatforms, "largest accepted platform table")
        ->required();
    runCmd->add_option("--allocated-time", allocatedTime, "time units granted per request")
        ->required();
    runCmd->add_option("--vars", runVars, "input variable assignments (.vars)");
    runCmd->add_option("--src", runSrc, "source for variable binding (.adp)");
    runCmd->add_option("--layout", runLayout, "layout sidecar for variable binding (.layout)");
    runCmd->add_flag("--dump-vars", dumpVars, "print final external variables");

    std::string wcetFile, wcetPlatform;
    auto *wcetCmd = app.add_subcommand("wcet", "print the platform/WCET table");
    wcetCmd->add_option("file", wcetFile, "compiled file (.mcf)")->required();
    wcetCmd->add_option("--platform", wcetPlatform, "platform identity filter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (compileCmd->parsed()) return cmdCompile(srcPath, perfPaths, outPath, layoutOut);
    if (inspectCmd->parsed()) return cmdInspect(inspectPath, disasm);
    if (runCmd->parsed())
        return cmdRun(runFile, runPerf, budget, maxPlatforms, allocatedTime, runVars, runSrc,
                      runLayout, dumpVars);
    if (wcetCmd->parsed()) return cmdWcet(wcetFile, wcetPlatform);
    return kExitUsage;
}
