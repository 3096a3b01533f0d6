#pragma once

#include <optional>
#include <vector>

#include "raise/core/util.hpp"

namespace raise::sim {

/// Writes a valid grayscale PNG of the given size whose tEXt chunk carries
/// the satisfaction bit vector. Pixel content is flat gray; nothing ever
/// decodes it.
core::Bytes encode_sim_png(int width, int height, const std::vector<bool>& bits);

/// Recovers the bit vector from the tEXt chunk. nullopt when the payload is
/// not a sim PNG.
std::optional<std::vector<bool>> decode_sim_bits(const core::Bytes& png);

}  // namespace raise::sim
