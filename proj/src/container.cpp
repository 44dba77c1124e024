#include "macrocell/container.hpp"

#include "macrocell/binfmt.hpp"

#include <map>
#include <stdexcept>

namespace macrocell {

const char *initStatusName(InitStatus status) {
    switch (status) {
    case InitStatus::Ok: return "OK";
    case InitStatus::ErrFileParse: return "ERR_FILE_PARSE";
    case InitStatus::ErrMemory: return "ERR_MEMORY";
    case InitStatus::ErrTooManyPlatforms: return "ERR_TOO_MANY_PLATFORMS";
    case InitStatus::ErrIncompatiblePlatform: return "ERR_INCOMPATIBLE_PLATFORM";
    case InitStatus::ErrWcetExceedsAllocation: return "ERR_WCET_EXCEEDS_ALLOCATION";
    }
    return "?";
}

const char *execStatusName(ExecStatus status) {
    switch (status) {
    case ExecStatus::Ok: return "OK";
    case ExecStatus::ErrUnknownContext: return "UNKNOWN_CONTEXT";
    case ExecStatus::ErrDivByZero: return "DIV_BY_ZERO";
    case ExecStatus::ErrIndexOutOfBounds: return "INDEX_OUT_OF_BOUNDS";
    case ExecStatus::ErrRegionViolation: return "REGION_VIOLATION";
    case ExecStatus::ErrStackOverflow: return "STACK_OVERFLOW";
    case ExecStatus::ErrFuelExhausted: return "FUEL_EXHAUSTED";
    }
    return "?";
}

ExecStatus execStatusFromTrap(Trap trap) {
    switch (trap) {
    case Trap::DivByZero: return ExecStatus::ErrDivByZero;
    case Trap::IndexOutOfBounds: return ExecStatus::ErrIndexOutOfBounds;
    case Trap::RegionViolation: return ExecStatus::ErrRegionViolation;
    case Trap::StackOverflow: return ExecStatus::ErrStackOverflow;
    case Trap::FuelExhausted: return ExecStatus::ErrFuelExhausted;
    }
    return ExecStatus::ErrRegionViolation;
}

namespace {

struct Context {
    MacroCode code;
    uint64_t memoryCharged = 0;
    std::vector<uint8_t> locals;
    ExternalRegion external;
    uint64_t fuelBudget = 0;
    // Keeps the stored file bytes alive for the context's lifetime.
    std::shared_ptr<const std::vector<uint8_t>> fileRef;
};

uint64_t fnv1a(uint64_t hash, const uint8_t *data, size_t size) {
    for (size_t i = 0; i < size; i++) {
        hash ^= data[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

uint64_t fnv1aU64(uint64_t hash, uint64_t value) {
    uint8_t bytes[8];
    for (int i = 0; i < 8; i++) bytes[i] = static_cast<uint8_t>(value >> (8 * i));
    return fnv1a(hash, bytes, sizeof bytes);
}

} // namespace

struct Container::Impl {
    ContainerConfig config;
    std::string identity;
    CostTable costs{};
    uint64_t nextId = 1;
    uint64_t memoryInUse = 0;
    std::map<uint64_t, Context> contexts; // ordered so the digest is canonical
};

Container::Container(ContainerConfig config) : impl_(std::make_unique<Impl>()) {
    if (config.memoryBudget == 0)
        throw std::invalid_argument("container memory budget must be positive");
    if (config.maxPlatformTypes == 0)
        throw std::invalid_argument("container must accept at least one platform type");
    const PlatformType &p = config.platform.platform;
    for (const std::string *field :
         {&p.hardwareType, &p.hardwareVersion, &p.osType, &p.osVersion, &p.containerVersion})
        if (field->empty())
            throw std::invalid_argument("container platform fields must be non-empty");
    for (const OpInfo &info : opTable())
        if (config.platform.opCosts.find(info.mnemonic) == config.platform.opCosts.end() ||
            config.platform.opCosts.at(info.mnemonic) == 0)
            throw std::invalid_argument(std::string("container platform lacks a cost for ") +
                                        info.mnemonic);
    impl_->identity = p.identity();
    impl_->costs = config.platform.costTable();
    impl_->config = std::move(config);
}

Container::~Container() = default;

InitResponse Container::initialize(const InitRequest &request) {
    // 1. Full file parse. Any structural or checksum fault is one error.
    if (!request.compiledFile) return InitResponse{InitStatus::ErrFileParse, 0};
    auto parsed = deserialize(*request.compiledFile);
    if (!parsed.ok()) return InitResponse{InitStatus::ErrFileParse, 0};
    CompiledFile file = std::move(parsed.value());

    // 2. Memory check: code + locals + stack reserve against the remaining
    // budget; the external region must match the header exactly.
    uint64_t needed = uint64_t(file.header.macroCodeLength) + file.header.localVarSize +
                      kStackBytes;
    uint64_t remaining = impl_->config.memoryBudget - impl_->memoryInUse;
    if (needed > remaining) return InitResponse{InitStatus::ErrMemory, 0};
    if (request.external.size() != file.header.externalVarSize)
        return InitResponse{InitStatus::ErrMemory, 0};

    // 3. Macro-code load (decoded form moves into container memory).
    Context context;
    context.code = std::move(file.code);
    context.memoryCharged = needed;

    // 4. Initialization WCET check: bound the table scan.
    if (file.header.platformTypeCount > impl_->config.maxPlatformTypes)
        return InitResponse{InitStatus::ErrTooManyPlatforms, 0};

    // 5. Compatibility check.
    int entry = file.table.find(impl_->identity);
    if (entry < 0) return InitResponse{InitStatus::ErrIncompatiblePlatform, 0};

    // 6. Execution WCET check.
    uint64_t wcet = file.table.entries[size_t(entry)].wcet;
    if (wcet > request.allocatedTime)
        return InitResponse{InitStatus::ErrWcetExceedsAllocation, 0};

    // 7. Context creation; ids are never reused.
    context.locals.assign(file.header.localVarSize, 0);
    context.external = request.external;
    uint64_t overhead = impl_->config.platform.requestOverhead;
    context.fuelBudget = wcet > overhead ? wcet - overhead : 0;
    context.fileRef = request.compiledFile;

    uint64_t id = impl_->nextId++;
    impl_->memoryInUse += needed;
    impl_->contexts.emplace(id, std::move(context));
    return InitResponse{InitStatus::Ok, id};
}

ExecResponse Container::execute(const ExecRequest &request) {
    auto it = impl_->contexts.find(request.contextId);
    if (it == impl_->contexts.end()) return ExecResponse{ExecStatus::ErrUnknownContext, 0};
    Context &context = it->second;

    RunResult result = run(context.code, context.locals, context.external, impl_->costs,
                           context.fuelBudget);
    if (result.trap) return ExecResponse{execStatusFromTrap(*result.trap), result.fuelConsumed};
    return ExecResponse{ExecStatus::Ok, result.fuelConsumed};
}

bool Container::releaseContext(uint64_t contextId) {
    auto it = impl_->contexts.find(contextId);
    if (it == impl_->contexts.end()) return false;
    impl_->memoryInUse -= it->second.memoryCharged;
    impl_->contexts.erase(it);
    return true;
}

size_t Container::contextCount() const { return impl_->contexts.size(); }

uint64_t Container::memoryInUse() const { return impl_->memoryInUse; }

uint64_t Container::stateDigest() const {
    uint64_t hash = 14695981039346656037ull;
    hash = fnv1aU64(hash, impl_->nextId);
    hash = fnv1aU64(hash, impl_->memoryInUse);
    for (const auto &[id, context] : impl_->contexts) {
        hash = fnv1aU64(hash, id);
        hash = fnv1aU64(hash, context.fuelBudget);
        hash = fnv1a(hash, context.locals.data(), context.locals.size());
        std::vector<uint8_t> code = encode(context.code.instructions);
        hash = fnv1a(hash, code.data(), code.size());
    }
    return hash;
}

} // namespace macrocell
