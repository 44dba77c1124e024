// macrocell/harness.hpp - host-side harness simulating the application
// that embeds a container: it owns the external region, binds variable
// names to offsets, drives the init/execute protocol, and records a trace.
#pragma once

#include "macrocell/compiled_file.hpp"
#include "macrocell/container.hpp"
#include "macrocell/expected.hpp"
#include "macrocell/layout_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace macrocell {

// Name->offset binding over a host-owned external buffer. Paths address
// scalars: "ground", "calculator[3].powered". Indices use declared bounds.
class ExternalBinding {
  public:
    static ExternalBinding fromProgram(const TypedProgram &program, const VariableLayout &layout);
    static ExternalBinding fromLayoutFile(const LayoutFile &layout);

    uint32_t regionSize() const;
    uint8_t *data();
    const uint8_t *data() const;
    ExternalRegion region();

    struct AccessError {
        enum class Kind { UnknownPath, IndexOutOfDeclaredRange, ValueOverflow, LocalVar };
        Kind kind;
        std::string detail;
    };

    Expected<int64_t, AccessError> readVar(std::string_view path) const;
    std::optional<AccessError> writeVar(std::string_view path, int64_t value);

    // Declared scalar type of the path, for rendering values.
    Expected<ScalarKind, AccessError> scalarKind(std::string_view path) const;

    // Applies a .vars file: one "path = value" per line, '#' comments and
    // blank lines ignored; value is a decimal integer, true, or false.
    std::optional<std::string> applyVarsFile(std::string_view text);

    // All addressable scalar paths in layout order, for dump commands.
    std::vector<std::string> scalarPaths() const;

  private:
    struct Entry {
        BoundVar var;
    };
    std::vector<Entry> entries_;
    std::vector<uint8_t> buffer_;
};

// One request/response exchange, as a protocol trace line.
struct TraceEvent {
    std::string kind;    // "init", "exec", "release"
    std::string detail;  // e.g. "status=OK contextId=1" or "status=OK fuel=311"
};

struct ScenarioResult {
    bool passed;
    std::string report;             // human-readable summary of the checks
    std::vector<TraceEvent> trace;
};

// The rack-manager scenario: ten calculators report powered/criticity and
// the embedded decision rule picks which to stop. On ground, only the
// first calculator stops; in flight, every calculator with criticity
// below 5 stops. The caller supplies perf data for compilation and the
// container's platform config.
struct CalculatorState {
    bool powered;
    int8_t criticity;
};

struct RackScenarioInput {
    std::vector<PerfData> perfSet; // platforms compiled into the file
    ContainerConfig container;     // platform the container runs as
    uint64_t allocatedTime;
    bool ground;
    std::vector<CalculatorState> calculators; // exactly ten entries
};

const char *rackManagerSource();

ScenarioResult runRackManagerScenario(const RackScenarioInput &input);

} // namespace macrocell
