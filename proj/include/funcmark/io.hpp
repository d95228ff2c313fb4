#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "funcmark/grid_field.hpp"
#include "funcmark/mesh.hpp"
#include "funcmark/partition.hpp"

namespace funcmark {

// ASCII OBJ with v / vn / f records. Coordinates are printed with 9
// significant digits; parse errors carry the line number.
TriangleMesh read_obj(const std::string& path);
void write_obj(const std::string& path, const TriangleMesh& mesh);

// FMGD grid container: magic "FMGD", version u32 = 1, nx ny nz u32,
// bbox 6 x f64 (min then max), then nx*ny*nz f32 samples x-fastest.
// All fields little-endian; round-trips byte-exactly.
GridField read_grid(const std::string& path);
void write_grid(const std::string& path, const GridField& grid);

// Binary little-endian PLY, positions only.
std::vector<Vec3> read_ply_points(const std::string& path);
void write_ply_points(const std::string& path, const std::vector<Vec3>& points);

// The verifier's secret: layout parameters, message, and a fingerprint of
// the original field asset. Never embedded in shipped mesh/field files.
struct LayoutSecret {
    PartitionLayout layout;
    uint64_t seed = 0;
    std::string field_fingerprint;  // content hash of the original field file

    bool operator==(const LayoutSecret&) const = default;
};

LayoutSecret read_layout(const std::string& path);
void write_layout(const std::string& path, const LayoutSecret& secret);

// FNV-1a hash of a file's bytes, as a fixed-width hex string.
std::string file_fingerprint(const std::string& path);

}  // namespace funcmark
