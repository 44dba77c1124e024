#include "macrocell/region.hpp"

namespace macrocell {

namespace {
bool validWidth(uint32_t width) { return width == 1 || width == 2 || width == 4; }
} // namespace

bool ExternalRegion::load(int64_t offset, uint32_t width, uint32_t &out) const {
    if (!validWidth(width) || !inRange(offset, width)) return false;
    const uint8_t *at = data_ + offset;
    uint32_t value = 0;
    for (uint32_t i = 0; i < width; i++) value |= uint32_t(at[i]) << (8 * i);
    out = value;
    return true;
}

bool ExternalRegion::store(int64_t offset, uint32_t width, uint32_t value) {
    if (!validWidth(width) || !inRange(offset, width)) return false;
    uint8_t *at = data_ + offset;
    for (uint32_t i = 0; i < width; i++) at[i] = static_cast<uint8_t>(value >> (8 * i));
    return true;
}

} // namespace macrocell
