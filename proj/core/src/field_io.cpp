#include "npns/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace npns {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts need byte swaps");

namespace {

constexpr char kMagic[4] = {'N', 'P', 'N', 'S'};
constexpr uint32_t kVersion = 1;

void write_header(std::ofstream& out, const Grid& g, FieldKind kind, double time) {
    out.write(kMagic, 4);
    const uint32_t ver = kVersion;
    const uint32_t nx = static_cast<uint32_t>(g.nx);
    const uint32_t ny = static_cast<uint32_t>(g.ny);
    const uint32_t k = static_cast<uint32_t>(kind);
    out.write(reinterpret_cast<const char*>(&ver), 4);
    out.write(reinterpret_cast<const char*>(&nx), 4);
    out.write(reinterpret_cast<const char*>(&ny), 4);
    out.write(reinterpret_cast<const char*>(&k), 4);
    out.write(reinterpret_cast<const char*>(&time), 8);
}

SnapshotHeader read_header(std::ifstream& in, const std::string& path) {
    char magic[4];
    SnapshotHeader h;
    uint32_t kind = 0;
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw StructuralError("snapshot " + path + ": bad magic");
    in.read(reinterpret_cast<char*>(&h.version), 4);
    in.read(reinterpret_cast<char*>(&h.nx), 4);
    in.read(reinterpret_cast<char*>(&h.ny), 4);
    in.read(reinterpret_cast<char*>(&kind), 4);
    in.read(reinterpret_cast<char*>(&h.time), 8);
    if (!in) throw StructuralError("snapshot " + path + ": truncated header");
    if (h.version != kVersion)
        throw StructuralError("snapshot " + path + ": unsupported version");
    h.kind = static_cast<FieldKind>(kind);
    return h;
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::ifstream& in, std::vector<double>& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw StructuralError("snapshot " + path + ": truncated payload");
}

}  // namespace

void write_snapshot(const std::string& path, const ScalarField& f, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StructuralError("cannot open " + path + " for writing");
    write_header(out, f.grid, FieldKind::Scalar, time);
    write_doubles(out, f.v);
}

void write_snapshot(const std::string& path, const VectorField& v, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StructuralError("cannot open " + path + " for writing");
    write_header(out, v.grid, FieldKind::Vector, time);
    write_doubles(out, v.ux);
    write_doubles(out, v.uy);
}

SnapshotHeader read_snapshot_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open " + path);
    return read_header(in, path);
}

ScalarField read_scalar_snapshot(const std::string& path, const Grid& grid, double* time) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open " + path);
    const SnapshotHeader h = read_header(in, path);
    if (h.kind != FieldKind::Scalar)
        throw StructuralError("snapshot " + path + ": not a scalar field");
    if (h.nx != static_cast<uint32_t>(grid.nx) || h.ny != static_cast<uint32_t>(grid.ny))
        throw StructuralError("snapshot " + path + ": grid mismatch");
    ScalarField f(grid);
    read_doubles(in, f.v, path);
    if (time) *time = h.time;
    return f;
}

VectorField read_vector_snapshot(const std::string& path, const Grid& grid, double* time) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open " + path);
    const SnapshotHeader h = read_header(in, path);
    if (h.kind != FieldKind::Vector)
        throw StructuralError("snapshot " + path + ": not a vector field");
    if (h.nx != static_cast<uint32_t>(grid.nx) || h.ny != static_cast<uint32_t>(grid.ny))
        throw StructuralError("snapshot " + path + ": grid mismatch");
    VectorField v(grid);
    read_doubles(in, v.ux, path);
    read_doubles(in, v.uy, path);
    if (time) *time = h.time;
    return v;
}

}  // namespace npns
