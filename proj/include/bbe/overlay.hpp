#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>

#include "bbe/maps.hpp"

namespace bbe {

/// Deterministic per-instance color. Id 0 (background) is black; other ids
/// hash to a stable non-black RGB triple.
std::array<std::uint8_t, 3> instance_color(std::uint32_t id);

/// Renders a label map as a binary PPM (P6) raster. Byte-deterministic.
void write_ppm(std::ostream& out, const LabelMap& labels);

void save_ppm(const std::string& path, const LabelMap& labels);

}  // namespace bbe
