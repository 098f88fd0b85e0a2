#include "nlsplit/snapshot.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace nlsplit {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error("snapshot: truncated file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw std::runtime_error("snapshot: truncated file");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_snapshot(const std::string& path, const WaveFunction& psi) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
    const Grid& g = psi.grid();
    os.write("NLSP", 4);
    put_u32(os, kSnapshotVersion);
    put_u32(os, static_cast<std::uint32_t>(g.dims));
    put_u32(os, static_cast<std::uint32_t>(psi.components()));
    for (int d = 0; d < 3; ++d)
        put_u32(os, static_cast<std::uint32_t>(g.points[d]));
    for (int d = 0; d < 3; ++d)
        put_f64(os, d < g.dims ? g.lengths[d] : 1.0);
    for (const Complex& v : psi.values()) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    if (!os)
        throw std::runtime_error("snapshot: write to '" + path + "' failed");
}

WaveFunction read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("snapshot: cannot open '" + path + "'");
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "NLSP", 4) != 0)
        throw std::runtime_error("snapshot: bad magic in '" + path + "'");
    const std::uint32_t version = get_u32(is);
    if (version != kSnapshotVersion)
        throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
    const auto dims = static_cast<int>(get_u32(is));
    const auto components = static_cast<int>(get_u32(is));
    std::array<std::uint32_t, 3> n{};
    for (auto& v : n)
        v = get_u32(is);
    std::array<double, 3> len{};
    for (auto& v : len)
        v = get_f64(is);
    if (dims < 1 || dims > 3 || components < 1)
        throw std::runtime_error("snapshot: corrupt header in '" + path + "'");

    std::vector<int> points;
    std::vector<double> lengths;
    for (int d = 0; d < dims; ++d) {
        points.push_back(static_cast<int>(n[static_cast<std::size_t>(d)]));
        lengths.push_back(len[static_cast<std::size_t>(d)]);
    }
    WaveFunction psi(make_grid(dims, points, lengths), components);
    for (Complex& v : psi.values()) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        v = Complex{re, im};
    }
    return psi;
}

SnapshotInfo inspect_snapshot(const std::string& path) {
    const WaveFunction psi = read_snapshot(path);
    SnapshotInfo info;
    info.grid = psi.grid();
    info.components = psi.components();
    info.norm_per_component = component_norms(psi);
    double s = 0.0;
    for (double v : info.norm_per_component)
        s += v * v;
    info.norm_total = std::sqrt(s);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const Complex& v : psi.values()) {
        const double d = std::norm(v);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    info.min_density = lo;
    info.max_density = hi;
    return info;
}

}  // namespace nlsplit
