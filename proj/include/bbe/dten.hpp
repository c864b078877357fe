#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bbe/maps.hpp"

namespace bbe {

/// DTEN: a minimal binary tensor container.
///
///   magic   "DTEN"            4 bytes
///   version u8                must be 1
///   dtype   u8                0 = f32, 1 = u8, 2 = u32
///   ndim    u16 little-endian
///   dims    ndim x u32 little-endian
///   payload row-major, little-endian
///
/// Probability, label and mask maps are written 2-D (H, W); offset maps are
/// written 3-D (H, W, 4) channel-last.
enum class Dtype : std::uint8_t {
    F32 = 0,
    U8 = 1,
    U32 = 2,
};

struct TensorHeader {
    Dtype dtype;
    std::vector<std::uint32_t> dims;
};

/// Parses and validates magic, version, dtype and shape. Leaves the stream
/// positioned at the payload.
TensorHeader read_tensor_header(std::istream& in);

void write_tensor_header(std::ostream& out, Dtype dtype,
                         const std::vector<std::uint32_t>& dims);

// Typed writers. Deterministic: same map, same bytes.
void write_dten(std::ostream& out, const Grid<float>& map);
void write_dten(std::ostream& out, const OffsetMap& map);
void write_dten(std::ostream& out, const LabelMap& map);
void write_dten(std::ostream& out, const BinaryMask& map);

// Typed readers. Each validates shape, payload length and the invariants of
// the requested map kind, raising TensorParseError with a specific code.
Grid<float> read_grid_f32(std::istream& in);   // finite values required
ProbMap read_prob_map(std::istream& in);       // additionally in [0, 1]
OffsetMap read_offset_map(std::istream& in);
LabelMap read_label_map(std::istream& in);     // contiguous 1..M ids
BinaryMask read_binary_mask(std::istream& in); // 0/1 values only

// File-path convenience wrappers; raise IoError when the file cannot be
// opened or written.
template <typename Map>
void save_dten(const std::string& path, const Map& map);
ProbMap load_prob_map(const std::string& path);
Grid<float> load_grid_f32(const std::string& path);
OffsetMap load_offset_map(const std::string& path);
LabelMap load_label_map(const std::string& path);
BinaryMask load_binary_mask(const std::string& path);

}  // namespace bbe
