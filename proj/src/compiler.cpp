#include "macrocell/compiler.hpp"

#include "macrocell/binfmt.hpp"

#include <set>

namespace macrocell {

CompiledFile assembleCompiledFile(MacroCode code, WcetTable table, uint32_t externalVarSize,
                                  uint32_t localVarSize, std::string compilerType,
                                  std::string compilerVersion) {
    CompiledFile file;
    file.header.formatVersion = kFormatVersion;
    file.header.compilerType = std::move(compilerType);
    file.header.compilerVersion = std::move(compilerVersion);
    file.header.macroCodeLength = code.byteLength;
    file.header.externalVarSize = externalVarSize;
    file.header.localVarSize = localVarSize;
    file.header.platformTypeCount = static_cast<uint16_t>(table.entries.size());
    file.code = std::move(code);
    file.table = std::move(table);
    file.header.contentChecksum = contentChecksum(file);
    return file;
}

Expected<CompileOutput, CompileFailure> compile(std::string_view source,
                                                const std::vector<PerfData> &perfSet) {
    if (perfSet.empty())
        return CompileFailure{{}, "EmptyPerfSet: at least one performance data set is required"};

    std::set<std::string> identities;
    for (const PerfData &perf : perfSet) {
        if (!identities.insert(platformIdentity(perf)).second)
            return CompileFailure{
                {}, "DuplicatePlatformType: " + platformIdentity(perf) + " appears twice"};
    }

    AnalyzeResult analyzed = analyzeSource(source);
    if (!analyzed.ok()) return CompileFailure{std::move(analyzed.diags), "invalid source"};

    CompileOutput output;
    output.program = std::move(*analyzed.program);
    output.layout = layoutVariables(output.program);

    auto generated = generateCode(output.program, output.layout);
    if (!generated.ok()) {
        const CodegenError &err = generated.error();
        return CompileFailure{{}, (err.kind == CodegenError::JumpOutOfRange
                                       ? std::string("JumpOutOfRange: ")
                                       : std::string("ExpressionTooDeep: ")) +
                                      err.detail};
    }

    WcetTable table;
    for (const PerfData &perf : perfSet) {
        auto wcet = computeWcet(generated.value().code, generated.value().map, perf);
        if (!wcet.ok()) {
            const WcetError &err = wcet.error();
            return CompileFailure{{}, (err.kind == WcetError::Overflow
                                           ? std::string("WcetOverflow: ")
                                           : std::string("MissingOpcode: ")) +
                                          err.detail};
        }
        table.entries.push_back(PlatformEntry{perf.platform, wcet.value()});
    }

    output.file = assembleCompiledFile(std::move(generated.value().code), std::move(table),
                                       output.layout.externalTotal, output.layout.localTotal);
    return output;
}

} // namespace macrocell
