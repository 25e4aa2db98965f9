#pragma once

#include <cstdint>
#include <string>

#include "npns/grid.hpp"

namespace npns {

// Binary snapshot format (little-endian):
//   bytes 0..3   magic "NPNS"
//   u32          version (currently 1)
//   u32          nx
//   u32          ny
//   u32          field kind: 0 = cell scalar, 1 = MAC vector
//   f64          time stamp
// followed by raw f64 values: nx*ny for a scalar, (nx+1)*ny then nx*(ny+1)
// for a vector. Grid side lengths travel with the caller's grid.
enum class FieldKind : uint32_t { Scalar = 0, Vector = 1 };

void write_snapshot(const std::string& path, const ScalarField& f, double time);
void write_snapshot(const std::string& path, const VectorField& v, double time);

struct SnapshotHeader {
    uint32_t version = 0;
    uint32_t nx = 0, ny = 0;
    FieldKind kind = FieldKind::Scalar;
    double time = 0.0;
};

SnapshotHeader read_snapshot_header(const std::string& path);
ScalarField read_scalar_snapshot(const std::string& path, const Grid& grid, double* time = nullptr);
VectorField read_vector_snapshot(const std::string& path, const Grid& grid, double* time = nullptr);

}  // namespace npns
