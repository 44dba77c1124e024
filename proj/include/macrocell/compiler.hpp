// macrocell/compiler.hpp - the macro-compiler pipeline: source + perf data
// in, compiled file out.
#pragma once

#include "macrocell/codegen.hpp"
#include "macrocell/compiled_file.hpp"
#include "macrocell/expected.hpp"
#include "macrocell/layout.hpp"
#include "macrocell/perfdata.hpp"
#include "macrocell/sema.hpp"
#include "macrocell/wcet.hpp"

#include <string>
#include <vector>

namespace macrocell {

inline constexpr const char *kCompilerType = "macrocell";
inline constexpr const char *kCompilerVersion = "1.0.0";

struct CompileFailure {
    std::vector<Diagnostic> diags; // front-end diagnostics, when any
    std::string message;           // everything else (perf set, codegen, overflow)
};

struct CompileOutput {
    CompiledFile file;
    TypedProgram program;
    VariableLayout layout;
};

// Compiles source against a non-empty set of perf data with pairwise
// distinct platform identities. The output is a pure function of the
// inputs: identical source and perf set give identical bytes. The WCET
// table holds one entry per perf data, in input order.
Expected<CompileOutput, CompileFailure> compile(std::string_view source,
                                                const std::vector<PerfData> &perfSet);

// Builds a CompiledFile with a consistent header (lengths, counts,
// checksum) from already-produced parts. Also used by tests that need
// hand-crafted but well-formed files.
CompiledFile assembleCompiledFile(MacroCode code, WcetTable table, uint32_t externalVarSize,
                                  uint32_t localVarSize, std::string compilerType = kCompilerType,
                                  std::string compilerVersion = kCompilerVersion);

} // namespace macrocell
