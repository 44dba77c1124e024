#include "macrocell/harness.hpp"

#include "macrocell/binfmt.hpp"
#include "macrocell/compiler.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <sstream>

namespace macrocell {

namespace {

// Parsed form of "name", "name[3]", "name.field", "name[3].field".
struct VarPath {
    std::string name;
    bool hasIndex = false;
    int64_t index = 0;
    std::string field;
};

std::optional<VarPath> parsePath(std::string_view text) {
    VarPath path;
    size_t pos = 0;
    auto ident = [&]() {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            pos++;
        return std::string(text.substr(start, pos - start));
    };
    path.name = ident();
    if (path.name.empty()) return std::nullopt;
    if (pos < text.size() && text[pos] == '[') {
        pos++;
        size_t start = pos;
        if (pos < text.size() && text[pos] == '-') pos++;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') pos++;
        auto [end, ec] =
            std::from_chars(text.data() + start, text.data() + pos, path.index);
        if (ec != std::errc() || end != text.data() + pos) return std::nullopt;
        if (pos >= text.size() || text[pos] != ']') return std::nullopt;
        pos++;
        path.hasIndex = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        pos++;
        path.field = ident();
        if (path.field.empty()) return std::nullopt;
    }
    return pos == text.size() ? std::optional<VarPath>(std::move(path)) : std::nullopt;
}

int64_t scalarMin(ScalarKind kind) {
    switch (kind) {
    case ScalarKind::Bool: return 0;
    case ScalarKind::Int8: return -128;
    case ScalarKind::Int16: return -32768;
    case ScalarKind::Int32: return INT32_MIN;
    }
    return 0;
}

int64_t scalarMax(ScalarKind kind) {
    switch (kind) {
    case ScalarKind::Bool: return 1;
    case ScalarKind::Int8: return 127;
    case ScalarKind::Int16: return 32767;
    case ScalarKind::Int32: return INT32_MAX;
    }
    return 0;
}

int64_t signExtend(uint32_t raw, ScalarKind kind) {
    switch (kind) {
    case ScalarKind::Bool: return raw != 0 ? 1 : 0;
    case ScalarKind::Int8: return static_cast<int8_t>(raw);
    case ScalarKind::Int16: return static_cast<int16_t>(raw);
    case ScalarKind::Int32: return static_cast<int32_t>(raw);
    }
    return 0;
}

} // namespace

ExternalBinding ExternalBinding::fromProgram(const TypedProgram &program,
                                             const VariableLayout &layout) {
    ExternalBinding binding;
    size_t ext = 0;
    size_t loc = 0;
    for (const VarDecl &decl : program.ast.decls) {
        const LayoutEntry &entry =
            decl.isLocal ? layout.locals[loc++] : layout.externals[ext++];
        binding.entries_.push_back(Entry{BoundVar{decl.name, decl.isLocal, entry.offset,
                                                  decl.type}});
    }
    binding.buffer_.assign(layout.externalTotal, 0);
    return binding;
}

ExternalBinding ExternalBinding::fromLayoutFile(const LayoutFile &layout) {
    ExternalBinding binding;
    for (const BoundVar &var : layout.vars) binding.entries_.push_back(Entry{var});
    binding.buffer_.assign(layout.externalTotal, 0);
    return binding;
}

uint32_t ExternalBinding::regionSize() const { return static_cast<uint32_t>(buffer_.size()); }
uint8_t *ExternalBinding::data() { return buffer_.data(); }
const uint8_t *ExternalBinding::data() const { return buffer_.data(); }
ExternalRegion ExternalBinding::region() { return ExternalRegion(std::span(buffer_)); }

namespace {

struct ResolvedScalar {
    uint32_t offset;
    ScalarKind kind;
};

// Walks a parsed path against a bound variable. Kept out of the class so
// read and write share one resolution rule.
Expected<ResolvedScalar, ExternalBinding::AccessError>
resolveScalar(const BoundVar &var, const VarPath &path) {
    using AccessError = ExternalBinding::AccessError;
    if (var.isLocal)
        return AccessError{AccessError::Kind::LocalVar,
                           "'" + var.name + "' is a local variable, not an external one"};

    int64_t offset = var.offset;
    if (var.type.isArray) {
        if (!path.hasIndex)
            return AccessError{AccessError::Kind::UnknownPath,
                               "'" + var.name + "' is an array and needs an index"};
        if (path.index < var.type.lo || path.index > var.type.hi) {
            std::ostringstream msg;
            msg << "index " << path.index << " is outside '" << var.name << "[" << var.type.lo
                << ".." << var.type.hi << "]'";
            return AccessError{AccessError::Kind::IndexOutOfDeclaredRange, msg.str()};
        }
        offset += (path.index - var.type.lo) * int64_t(elementSize(var.type));
    } else if (path.hasIndex) {
        return AccessError{AccessError::Kind::UnknownPath,
                           "'" + var.name + "' is not an array"};
    }

    if (var.type.isStructElem()) {
        if (path.field.empty())
            return AccessError{AccessError::Kind::UnknownPath,
                               "'" + var.name + "' is a struct and needs a field"};
        const StructType &st = var.type.structElem();
        for (const StructField &field : st.fields)
            if (field.name == path.field)
                return ResolvedScalar{static_cast<uint32_t>(offset + fieldOffset(st, field.name)),
                                      field.type};
        return AccessError{AccessError::Kind::UnknownPath,
                           "'" + var.name + "' has no field named '" + path.field + "'"};
    }
    if (!path.field.empty())
        return AccessError{AccessError::Kind::UnknownPath, "'" + var.name + "' has no fields"};
    return ResolvedScalar{static_cast<uint32_t>(offset), var.type.scalarElem()};
}

} // namespace

Expected<int64_t, ExternalBinding::AccessError>
ExternalBinding::readVar(std::string_view pathText) const {
    auto path = parsePath(pathText);
    if (!path)
        return AccessError{AccessError::Kind::UnknownPath,
                           "unparsable variable path '" + std::string(pathText) + "'"};
    for (const Entry &entry : entries_) {
        if (entry.var.name != path->name) continue;
        auto resolved = resolveScalar(entry.var, *path);
        if (!resolved.ok()) return resolved.error();
        uint32_t width = scalarSize(resolved.value().kind);
        uint32_t raw = 0;
        for (uint32_t i = 0; i < width; i++)
            raw |= uint32_t(buffer_[resolved.value().offset + i]) << (8 * i);
        return signExtend(raw, resolved.value().kind);
    }
    return AccessError{AccessError::Kind::UnknownPath,
                       "no variable named '" + path->name + "'"};
}

Expected<ScalarKind, ExternalBinding::AccessError>
ExternalBinding::scalarKind(std::string_view pathText) const {
    auto path = parsePath(pathText);
    if (!path)
        return AccessError{AccessError::Kind::UnknownPath,
                           "unparsable variable path '" + std::string(pathText) + "'"};
    for (const Entry &entry : entries_) {
        if (entry.var.name != path->name) continue;
        auto resolved = resolveScalar(entry.var, *path);
        if (!resolved.ok()) return resolved.error();
        return resolved.value().kind;
    }
    return AccessError{AccessError::Kind::UnknownPath,
                       "no variable named '" + path->name + "'"};
}

std::optional<ExternalBinding::AccessError> ExternalBinding::writeVar(std::string_view pathText,
                                                                      int64_t value) {
    auto path = parsePath(pathText);
    if (!path)
        return AccessError{AccessError::Kind::UnknownPath,
                           "unparsable variable path '" + std::string(pathText) + "'"};
    for (const Entry &entry : entries_) {
        if (entry.var.name != path->name) continue;
        auto resolved = resolveScalar(entry.var, *path);
        if (!resolved.ok()) return resolved.error();
        ScalarKind kind = resolved.value().kind;
        if (value < scalarMin(kind) || value > scalarMax(kind)) {
            std::ostringstream msg;
            msg << "value " << value << " does not fit " << scalarName(kind);
            return AccessError{AccessError::Kind::ValueOverflow, msg.str()};
        }
        uint32_t width = scalarSize(kind);
        for (uint32_t i = 0; i < width; i++)
            buffer_[resolved.value().offset + i] =
                static_cast<uint8_t>(uint64_t(value) >> (8 * i));
        return std::nullopt;
    }
    return AccessError{AccessError::Kind::UnknownPath,
                       "no variable named '" + path->name + "'"};
}

std::optional<std::string> ExternalBinding::applyVarsFile(std::string_view text) {
    int lineNo = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        lineNo++;

        size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string_view::npos) continue;
        size_t finish = line.find_last_not_of(" \t\r");
        line = line.substr(begin, finish - begin + 1);
        if (line.front() == '#') continue;

        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            return "line " + std::to_string(lineNo) + ": expected 'path = value'";
        std::string_view pathText = line.substr(0, eq);
        std::string_view valueText = line.substr(eq + 1);
        while (!pathText.empty() && (pathText.back() == ' ' || pathText.back() == '\t'))
            pathText.remove_suffix(1);
        while (!valueText.empty() && (valueText.front() == ' ' || valueText.front() == '\t'))
            valueText.remove_prefix(1);

        int64_t value = 0;
        if (valueText == "true") {
            value = 1;
        } else if (valueText == "false") {
            value = 0;
        } else {
            auto [end, ec] =
                std::from_chars(valueText.data(), valueText.data() + valueText.size(), value);
            if (ec != std::errc() || end != valueText.data() + valueText.size())
                return "line " + std::to_string(lineNo) + ": unparsable value '" +
                       std::string(valueText) + "'";
        }
        if (auto err = writeVar(pathText, value))
            return "line " + std::to_string(lineNo) + ": " + err->detail;
    }
    return std::nullopt;
}

std::vector<std::string> ExternalBinding::scalarPaths() const {
    std::vector<std::string> paths;
    for (const Entry &entry : entries_) {
        const BoundVar &var = entry.var;
        if (var.isLocal) continue;
        int64_t lo = var.type.isArray ? var.type.lo : 0;
        int64_t hi = var.type.isArray ? var.type.hi : 0;
        for (int64_t k = lo; k <= hi; k++) {
            std::string base = var.name;
            if (var.type.isArray) base += "[" + std::to_string(k) + "]";
            if (var.type.isStructElem()) {
                for (const StructField &field : var.type.structElem().fields)
                    paths.push_back(base + "." + field.name);
            } else {
                paths.push_back(base);
            }
        }
    }
    return paths;
}

// ---------------------------------------------------------------------------
// Rack manager scenario
// ---------------------------------------------------------------------------

const char *rackManagerSource() {
    return R"(// Decision rule to stop calculators
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
}

ScenarioResult runRackManagerScenario(const RackScenarioInput &input) {
    ScenarioResult result;
    result.passed = false;
    std::ostringstream report;

    if (input.calculators.size() != 10) {
        report << "scenario needs exactly 10 calculators, got " << input.calculators.size()
               << '\n';
        result.report = report.str();
        return result;
    }

    auto compiled = compile(rackManagerSource(), input.perfSet);
    if (!compiled.ok()) {
        report << "compilation failed: " << compiled.error().message << '\n';
        for (const Diagnostic &diag : compiled.error().diags)
            report << formatDiagnostic("<embedded>", diag) << '\n';
        result.report = report.str();
        return result;
    }
    CompileOutput &output = compiled.value();

    auto bytes = serialize(output.file);
    if (!bytes.ok()) {
        report << "serialization failed: " << binErrorName(bytes.error().kind) << '\n';
        result.report = report.str();
        return result;
    }
    auto stored = std::make_shared<const std::vector<uint8_t>>(std::move(bytes.value()));

    ExternalBinding binding = ExternalBinding::fromProgram(output.program, output.layout);
    binding.writeVar("ground", input.ground ? 1 : 0);
    for (size_t k = 0; k < 10; k++) {
        std::string base = "calculator[" + std::to_string(k + 1) + "]";
        binding.writeVar(base + ".powered", input.calculators[k].powered ? 1 : 0);
        binding.writeVar(base + ".criticity", input.calculators[k].criticity);
    }

    Container container(input.container);
    InitResponse init = container.initialize(
        InitRequest{stored, binding.region(), input.allocatedTime});
    result.trace.push_back(TraceEvent{
        "init", std::string("status=") + initStatusName(init.status) +
                    (init.status == InitStatus::Ok
                         ? " contextId=" + std::to_string(init.contextId)
                         : "")});
    if (init.status != InitStatus::Ok) {
        report << "initialization failed: " << initStatusName(init.status) << '\n';
        result.report = report.str();
        return result;
    }

    ExecResponse exec = container.execute(ExecRequest{init.contextId});
    result.trace.push_back(TraceEvent{
        "exec", std::string("status=") + execStatusName(exec.status) +
                    " fuel=" + std::to_string(exec.fuelConsumed)});
    if (exec.status != ExecStatus::Ok) {
        report << "execution failed: " << execStatusName(exec.status) << '\n';
        result.report = report.str();
        return result;
    }

    // The decision rule, restated: on ground, the first calculator stops;
    // in flight, any calculator with criticity below 5 stops. Power is
    // only ever removed.
    bool allMatch = true;
    report << "ground=" << (input.ground ? "true" : "false") << '\n';
    for (size_t k = 0; k < 10; k++) {
        bool stops = input.ground ? (k == 0) : input.calculators[k].criticity < 5;
        bool expected = input.calculators[k].powered && !stops;
        auto actual = binding.readVar("calculator[" + std::to_string(k + 1) + "].powered");
        bool actualPowered = actual.ok() && actual.value() != 0;
        bool match = actualPowered == expected;
        allMatch = allMatch && match;
        report << "calculator[" << (k + 1) << "] criticity="
               << int(input.calculators[k].criticity) << " powered="
               << (actualPowered ? "true" : "false") << " expected="
               << (expected ? "true" : "false") << (match ? "" : " MISMATCH") << '\n';
    }

    container.releaseContext(init.contextId);
    result.trace.push_back(TraceEvent{"release", "status=OK"});

    result.passed = allMatch;
    report << (allMatch ? "decision rule honored" : "decision rule violated") << '\n';
    result.report = report.str();
    return result;
}

} // namespace macrocell
