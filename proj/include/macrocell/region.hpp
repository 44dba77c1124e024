// macrocell/region.hpp - checked view of the calling application's
// external-variable memory.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace macrocell {

// A byte window [0, size) inside caller-owned memory. Every access is
// range-checked; out-of-range reads and writes report failure instead of
// touching anything. The caller keeps the underlying buffer alive for the
// lifetime of the region and of any context bound to it.
class ExternalRegion {
  public:
    ExternalRegion() = default;
    explicit ExternalRegion(std::span<uint8_t> bytes) : data_(bytes.data()), size_(bytes.size()) {}

    size_t size() const { return size_; }

    bool inRange(int64_t offset, uint32_t width) const
    {
        return offset >= 0 && width > 0 && uint64_t(offset) + width <= size_;
    }

    // Little-endian load/store of 1, 2 or 4 bytes. Return false (and leave
    // memory untouched) when the range or width is invalid.
    bool load(int64_t offset, uint32_t width, uint32_t &out) const;
    bool store(int64_t offset, uint32_t width, uint32_t value);

  private:
    uint8_t *data_ = nullptr;
    size_t size_ = 0;
};

} // namespace macrocell
