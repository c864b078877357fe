#include "bbe/dten.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace bbe {

namespace {

constexpr char kMagic[4] = {'D', 'T', 'E', 'N'};
constexpr std::uint8_t kVersion = 1;

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out) throw IoError("DTEN: write failed");
}

void put_u8(std::ostream& out, std::uint8_t v) { put_bytes(out, &v, 1); }

void put_u16le(std::ostream& out, std::uint16_t v) {
    const std::uint8_t b[2] = {static_cast<std::uint8_t>(v & 0xff),
                               static_cast<std::uint8_t>(v >> 8)};
    put_bytes(out, b, 2);
}

void put_u32le(std::ostream& out, std::uint32_t v) {
    const std::uint8_t b[4] = {static_cast<std::uint8_t>(v & 0xff),
                               static_cast<std::uint8_t>((v >> 8) & 0xff),
                               static_cast<std::uint8_t>((v >> 16) & 0xff),
                               static_cast<std::uint8_t>((v >> 24) & 0xff)};
    put_bytes(out, b, 4);
}

void put_f32le(std::ostream& out, float v) { put_u32le(out, std::bit_cast<std::uint32_t>(v)); }

bool get_bytes(std::istream& in, void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount()) == n;
}

std::uint8_t get_u8(std::istream& in) {
    std::uint8_t v;
    if (!get_bytes(in, &v, 1)) {
        throw TensorParseError(TensorParseError::Code::LengthMismatch,
                               "DTEN: truncated input");
    }
    return v;
}

std::uint16_t get_u16le(std::istream& in) {
    std::uint8_t b[2];
    if (!get_bytes(in, b, 2)) {
        throw TensorParseError(TensorParseError::Code::LengthMismatch,
                               "DTEN: truncated input");
    }
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32le(std::istream& in) {
    std::uint8_t b[4];
    if (!get_bytes(in, b, 4)) {
        throw TensorParseError(TensorParseError::Code::LengthMismatch,
                               "DTEN: truncated input");
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

// Payload element readers; a short read is a length mismatch.
float get_f32le(std::istream& in) { return std::bit_cast<float>(get_u32le(in)); }

void expect_eof(std::istream& in) {
    if (in.peek() != std::char_traits<char>::eof()) {
        throw TensorParseError(TensorParseError::Code::LengthMismatch,
                               "DTEN: trailing bytes after payload");
    }
}

std::pair<Eigen::Index, Eigen::Index> require_2d(const TensorHeader& h, Dtype dtype,
                                                 const char* what) {
    if (h.dtype != dtype) {
        throw TensorParseError(TensorParseError::Code::BadDtype,
                               std::string("DTEN: wrong dtype for ") + what);
    }
    if (h.dims.size() != 2 || h.dims[0] == 0 || h.dims[1] == 0) {
        throw TensorParseError(TensorParseError::Code::BadShape,
                               std::string("DTEN: expected nonempty 2-D shape for ") + what);
    }
    return {static_cast<Eigen::Index>(h.dims[0]), static_cast<Eigen::Index>(h.dims[1])};
}

}  // namespace

TensorHeader read_tensor_header(std::istream& in) {
    char magic[4];
    if (!get_bytes(in, magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw TensorParseError(TensorParseError::Code::BadMagic, "DTEN: bad magic");
    }
    const std::uint8_t version = get_u8(in);
    if (version != kVersion) {
        throw TensorParseError(TensorParseError::Code::BadVersion,
                               "DTEN: unsupported version " + std::to_string(version));
    }
    const std::uint8_t dtype = get_u8(in);
    if (dtype > static_cast<std::uint8_t>(Dtype::U32)) {
        throw TensorParseError(TensorParseError::Code::BadDtype,
                               "DTEN: unknown dtype " + std::to_string(dtype));
    }
    const std::uint16_t ndim = get_u16le(in);
    TensorHeader h;
    h.dtype = static_cast<Dtype>(dtype);
    h.dims.resize(ndim);
    for (std::uint16_t i = 0; i < ndim; ++i) {
        h.dims[i] = get_u32le(in);
    }
    return h;
}

void write_tensor_header(std::ostream& out, Dtype dtype,
                         const std::vector<std::uint32_t>& dims) {
    put_bytes(out, kMagic, 4);
    put_u8(out, kVersion);
    put_u8(out, static_cast<std::uint8_t>(dtype));
    put_u16le(out, static_cast<std::uint16_t>(dims.size()));
    for (std::uint32_t d : dims) put_u32le(out, d);
}

void write_dten(std::ostream& out, const Grid<float>& map) {
    write_tensor_header(out, Dtype::F32,
                        {static_cast<std::uint32_t>(map.rows()),
                         static_cast<std::uint32_t>(map.cols())});
    for (Eigen::Index i = 0; i < map.size(); ++i) put_f32le(out, map.data()[i]);
}

void write_dten(std::ostream& out, const OffsetMap& map) {
    write_tensor_header(out, Dtype::F32,
                        {static_cast<std::uint32_t>(map.height),
                         static_cast<std::uint32_t>(map.width), 4u});
    for (Eigen::Index i = 0; i < map.data.rows(); ++i)
        for (int k = 0; k < 4; ++k) put_f32le(out, map.data(i, k));
}

void write_dten(std::ostream& out, const LabelMap& map) {
    write_tensor_header(out, Dtype::U32,
                        {static_cast<std::uint32_t>(map.rows()),
                         static_cast<std::uint32_t>(map.cols())});
    for (Eigen::Index i = 0; i < map.size(); ++i) put_u32le(out, map.data()[i]);
}

void write_dten(std::ostream& out, const BinaryMask& map) {
    write_tensor_header(out, Dtype::U8,
                        {static_cast<std::uint32_t>(map.rows()),
                         static_cast<std::uint32_t>(map.cols())});
    for (Eigen::Index i = 0; i < map.size(); ++i) put_u8(out, map.data()[i]);
}

Grid<float> read_grid_f32(std::istream& in) {
    const TensorHeader h = read_tensor_header(in);
    const auto [rows, cols] = require_2d(h, Dtype::F32, "f32 map");
    Grid<float> m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = get_f32le(in);
    expect_eof(in);
    if (!m.isFinite().all()) {
        throw TensorParseError(TensorParseError::Code::NonFinite,
                               "DTEN: non-finite values in f32 map");
    }
    return m;
}

ProbMap read_prob_map(std::istream& in) {
    ProbMap m = read_grid_f32(in);
    if (!(m >= 0.0f && m <= 1.0f).all()) {
        throw TensorParseError(TensorParseError::Code::InvalidValue,
                               "DTEN: probability outside [0, 1]");
    }
    return m;
}

OffsetMap read_offset_map(std::istream& in) {
    const TensorHeader h = read_tensor_header(in);
    if (h.dtype != Dtype::F32) {
        throw TensorParseError(TensorParseError::Code::BadDtype,
                               "DTEN: wrong dtype for offset map");
    }
    if (h.dims.size() != 3 || h.dims[0] == 0 || h.dims[1] == 0 || h.dims[2] != 4) {
        throw TensorParseError(TensorParseError::Code::BadShape,
                               "DTEN: offset map must be H x W x 4");
    }
    OffsetMap m = OffsetMap::zeros(static_cast<Eigen::Index>(h.dims[0]),
                                   static_cast<Eigen::Index>(h.dims[1]));
    for (Eigen::Index i = 0; i < m.data.rows(); ++i)
        for (int k = 0; k < 4; ++k) m.data(i, k) = get_f32le(in);
    expect_eof(in);
    if (!m.data.isFinite().all()) {
        throw TensorParseError(TensorParseError::Code::NonFinite,
                               "DTEN: non-finite values in offset map");
    }
    return m;
}

LabelMap read_label_map(std::istream& in) {
    const TensorHeader h = read_tensor_header(in);
    const auto [rows, cols] = require_2d(h, Dtype::U32, "label map");
    LabelMap m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = get_u32le(in);
    expect_eof(in);
    try {
        validate_label_map(m);
    } catch (const ValidationError& e) {
        throw TensorParseError(TensorParseError::Code::InvalidValue, e.what());
    }
    return m;
}

BinaryMask read_binary_mask(std::istream& in) {
    const TensorHeader h = read_tensor_header(in);
    const auto [rows, cols] = require_2d(h, Dtype::U8, "mask");
    BinaryMask m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        std::uint8_t v;
        if (!get_bytes(in, &v, 1)) {
            throw TensorParseError(TensorParseError::Code::LengthMismatch,
                                   "DTEN: truncated payload");
        }
        m.data()[i] = v;
    }
    expect_eof(in);
    if ((m > 1).any()) {
        throw TensorParseError(TensorParseError::Code::InvalidValue,
                               "DTEN: mask values must be 0 or 1");
    }
    return m;
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

}  // namespace

template <typename Map>
void save_dten(const std::string& path, const Map& map) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_dten(f, map);
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

template void save_dten<Grid<float>>(const std::string&, const Grid<float>&);
template void save_dten<OffsetMap>(const std::string&, const OffsetMap&);
template void save_dten<LabelMap>(const std::string&, const LabelMap&);
template void save_dten<BinaryMask>(const std::string&, const BinaryMask&);

ProbMap load_prob_map(const std::string& path) {
    auto f = open_in(path);
    return read_prob_map(f);
}

Grid<float> load_grid_f32(const std::string& path) {
    auto f = open_in(path);
    return read_grid_f32(f);
}

OffsetMap load_offset_map(const std::string& path) {
    auto f = open_in(path);
    return read_offset_map(f);
}

LabelMap load_label_map(const std::string& path) {
    auto f = open_in(path);
    return read_label_map(f);
}

BinaryMask load_binary_mask(const std::string& path) {
    auto f = open_in(path);
    return read_binary_mask(f);
}

}  // namespace bbe
