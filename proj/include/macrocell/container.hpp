// macrocell/container.hpp - the execution container: validates compiled
// files, owns per-context local memory, and interprets macro-code under a
// fuel budget derived from the platform's WCET table entry.
//
// Initialization performs, in order:
//   1. full file parse (checksum verified)            -> ERR_FILE_PARSE
//   2. memory admission check                          -> ERR_MEMORY
//   3. macro-code load
//   4. platformTypeCount <= maxPlatformTypes           -> ERR_TOO_MANY_PLATFORMS
//   5. own platform identity present in WCET table     -> ERR_INCOMPATIBLE_PLATFORM
//   6. table WCET <= allocatedTime                     -> ERR_WCET_EXCEEDS_ALLOCATION
//   7. context creation (atomic: no state changes on any failure above)
//
// The memory check admits a file when
//   codeBytes + localVarSize + kStackBytes <= remaining budget
// and the provided external region length equals externalVarSize exactly.
//
// Execution charges per-instruction costs from the container's own perf
// data against fuel = tableWcet - requestOverhead, trapping with
// FUEL_EXHAUSTED before fuel would go negative. Local variables persist
// across execute calls on the same context.
#pragma once

#include "macrocell/compiled_file.hpp"
#include "macrocell/interp.hpp"
#include "macrocell/perfdata.hpp"
#include "macrocell/region.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace macrocell {

struct ContainerConfig {
    PerfData platform;        // the container's own platform and costs
    uint64_t memoryBudget;    // bytes available for all contexts together
    uint32_t maxPlatformTypes; // largest WCET table the container accepts
};

enum class InitStatus : uint8_t {
    Ok,
    ErrFileParse,
    ErrMemory,
    ErrTooManyPlatforms,
    ErrIncompatiblePlatform,
    ErrWcetExceedsAllocation,
};
const char *initStatusName(InitStatus status); // OK, ERR_FILE_PARSE, ...

enum class ExecStatus : uint8_t {
    Ok,
    ErrUnknownContext,
    ErrDivByZero,
    ErrIndexOutOfBounds,
    ErrRegionViolation,
    ErrStackOverflow,
    ErrFuelExhausted,
};
const char *execStatusName(ExecStatus status); // OK, ERR_DIV_BY_ZERO, ...
ExecStatus execStatusFromTrap(Trap trap);

struct InitRequest {
    // Shared so several contexts may hold the same compiled file.
    std::shared_ptr<const std::vector<uint8_t>> compiledFile;
    ExternalRegion external;  // caller-owned memory, length must match header
    uint64_t allocatedTime;   // time units granted per request
};

struct InitResponse {
    InitStatus status;
    uint64_t contextId; // valid only when status == Ok; never reused
};

struct ExecRequest {
    uint64_t contextId;
};

struct ExecResponse {
    ExecStatus status;
    uint64_t fuelConsumed; // instruction costs only, excludes request overhead
};

class Container {
  public:
    // Throws std::invalid_argument when the config is unusable: empty
    // platform identity field, zero maxPlatformTypes, or a cost table
    // missing an opcode.
    explicit Container(ContainerConfig config);
    ~Container();

    Container(const Container &) = delete;
    Container &operator=(const Container &) = delete;

    InitResponse initialize(const InitRequest &request);
    ExecResponse execute(const ExecRequest &request);

    // Frees the context's memory; its id is retired permanently.
    bool releaseContext(uint64_t contextId);

    size_t contextCount() const;
    uint64_t memoryInUse() const;

    // FNV-1a over every context's id, locals, and loaded code, in id order.
    // Equal digests before and after a rejected initialize prove the
    // rejection touched no container state.
    uint64_t stateDigest() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace macrocell
