#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ydvl/dynamics.hpp"

namespace ydvl {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

// Binary state snapshot, version 1:
//   magic "YDVL" | u32 version | u32 grid_n | f64 t | f64 mean_ux | f64 mean_uy
//   | u32 field_count | fields
// each field: u32 name_len | name bytes | grid_n^2 f64 samples (row-major,
// x fastest). Doubles are raw IEEE-754 little-endian, so a write/read
// round trip reproduces the state bitwise.
namespace snapshot_detail {

constexpr char kMagic[4] = {'Y', 'D', 'V', 'L'};
constexpr std::uint32_t kVersion = 1;

inline void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw FormatError("snapshot: truncated file");
    return v;
}
inline double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw FormatError("snapshot: truncated file");
    return v;
}

inline void put_field(std::ostream& os, const std::string& name,
                      const std::vector<double>& v) {
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace snapshot_detail

inline void write_snapshot(const FluidState& s, const std::string& path) {
    namespace d = snapshot_detail;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("snapshot: cannot open '" + path + "' for writing");
    os.write(d::kMagic, 4);
    d::put_u32(os, d::kVersion);
    d::put_u32(os, static_cast<std::uint32_t>(s.grid().n()));
    d::put_f64(os, s.t);
    d::put_f64(os, s.u_mean[0]);
    d::put_f64(os, s.u_mean[1]);
    d::put_u32(os, 8);
    d::put_field(os, "rho", s.rho.values());
    d::put_field(os, "u_x", s.u.x().values());
    d::put_field(os, "u_y", s.u.y().values());
    d::put_field(os, "eta", s.eta.values());
    d::put_field(os, "x_x", s.x_field.x().values());
    d::put_field(os, "x_y", s.x_field.y().values());
    d::put_field(os, "pi", s.pi.values());
    d::put_field(os, "omega", s.omega().values());
    if (!os) throw IoError("snapshot: write to '" + path + "' failed");
}

// Reads a snapshot. When expected_grid is given, a snapshot taken on a
// different grid raises GridMismatch.
inline FluidState read_snapshot(const std::string& path,
                                const Grid* expected_grid = nullptr) {
    namespace d = snapshot_detail;
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("snapshot: cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, d::kMagic, 4) != 0)
        throw FormatError("snapshot: bad magic in '" + path + "'");
    const std::uint32_t version = d::get_u32(is);
    if (version != d::kVersion)
        throw FormatError("snapshot: unsupported version " + std::to_string(version));
    const std::uint32_t n = d::get_u32(is);
    if (n < 8 || (n & (n - 1)) != 0)
        throw FormatError("snapshot: invalid grid size " + std::to_string(n));
    if (expected_grid && static_cast<int>(n) != expected_grid->n())
        throw GridMismatch("snapshot: grid " + std::to_string(n) +
                           " does not match context grid " +
                           std::to_string(expected_grid->n()));
    const Grid g(static_cast<int>(n));
    const double t = d::get_f64(is);
    const double mx = d::get_f64(is);
    const double my = d::get_f64(is);
    const std::uint32_t count = d::get_u32(is);

    std::map<std::string, std::vector<double>> fields;
    for (std::uint32_t f = 0; f < count; ++f) {
        const std::uint32_t len = d::get_u32(is);
        if (len > 256) throw FormatError("snapshot: implausible field name length");
        std::string name(len, '\0');
        is.read(name.data(), len);
        std::vector<double> v(g.size());
        is.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!is) throw FormatError("snapshot: truncated field '" + name + "'");
        fields.emplace(std::move(name), std::move(v));
    }

    auto take = [&](const char* name) -> std::vector<double> {
        auto it = fields.find(name);
        if (it == fields.end())
            throw FormatError(std::string("snapshot: missing field '") + name + "'");
        return std::move(it->second);
    };

    FluidState s{t,
                 ScalarField(g, take("rho")),
                 VectorField(ScalarField(g, take("u_x")), ScalarField(g, take("u_y"))),
                 {mx, my},
                 ScalarField(g, take("eta")),
                 VectorField(ScalarField(g, take("x_x")), ScalarField(g, take("x_y"))),
                 ScalarField(g, take("pi"))};
    return s;
}

}  // namespace ydvl
