#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "funcmark/errors.hpp"
#include "funcmark/linalg.hpp"

namespace funcmark {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<uint32_t, 3>> faces;
    std::vector<Vec3> normals;  // empty, or one unit normal per vertex

    bool has_normals() const { return !normals.empty(); }

    // Checks index ranges, degenerate faces, and normal array shape.
    void validate() const;

    Vec3 face_normal(size_t f) const;
    double face_area(size_t f) const;
    double total_area() const;
    void bbox(Vec3& lo, Vec3& hi) const;
};

// Area-weighted average of incident face normals, normalized.
void compute_vertex_normals(TriangleMesh& mesh);

}  // namespace funcmark
