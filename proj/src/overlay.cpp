#include "bbe/overlay.hpp"

#include <fstream>
#include <ostream>
#include <string>

#include "bbe/error.hpp"

namespace bbe {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint8_t, 3> instance_color(std::uint32_t id) {
    if (id == 0) return {0, 0, 0};
    const std::uint64_t h = splitmix64(id);
    std::array<std::uint8_t, 3> rgb = {static_cast<std::uint8_t>(h & 0xff),
                                       static_cast<std::uint8_t>((h >> 8) & 0xff),
                                       static_cast<std::uint8_t>((h >> 16) & 0xff)};
    if (rgb[0] == 0 && rgb[1] == 0 && rgb[2] == 0) rgb[2] = 0x80;  // never background black
    return rgb;
}

void write_ppm(std::ostream& out, const LabelMap& labels) {
    out << "P6\n" << labels.cols() << ' ' << labels.rows() << "\n255\n";
    std::string row;
    row.reserve(static_cast<std::size_t>(labels.cols()) * 3);
    for (Eigen::Index r = 0; r < labels.rows(); ++r) {
        row.clear();
        for (Eigen::Index c = 0; c < labels.cols(); ++c) {
            const auto rgb = instance_color(labels(r, c));
            row.push_back(static_cast<char>(rgb[0]));
            row.push_back(static_cast<char>(rgb[1]));
            row.push_back(static_cast<char>(rgb[2]));
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw IoError("PPM write failed");
}

void save_ppm(const std::string& path, const LabelMap& labels) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_ppm(f, labels);
}

}  // namespace bbe
