#include "funcmark/mesh.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace funcmark {

void TriangleMesh::validate() const {
    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& t = faces[f];
        for (uint32_t idx : t)
            if (idx >= vertices.size())
                throw InvalidMeshError("mesh: face " + std::to_string(f) +
                                       " references vertex " + std::to_string(idx) +
                                       " out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw InvalidMeshError("mesh: face " + std::to_string(f) + " is degenerate");
    }
    if (!normals.empty() && normals.size() != vertices.size())
        throw InvalidMeshError("mesh: normal count does not match vertex count");
}

Vec3 TriangleMesh::face_normal(size_t f) const {
    const auto& t = faces[f];
    Vec3 n = cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
    return normalized(n);
}

double TriangleMesh::face_area(size_t f) const {
    const auto& t = faces[f];
    return 0.5 * norm(cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]));
}

double TriangleMesh::total_area() const {
    double a = 0.0;
    for (size_t f = 0; f < faces.size(); ++f) a += face_area(f);
    return a;
}

void TriangleMesh::bbox(Vec3& lo, Vec3& hi) const {
    double inf = std::numeric_limits<double>::infinity();
    lo = {inf, inf, inf};
    hi = {-inf, -inf, -inf};
    for (const auto& v : vertices)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], v[a]);
            hi[a] = std::max(hi[a], v[a]);
        }
}

void compute_vertex_normals(TriangleMesh& mesh) {
    mesh.normals.assign(mesh.vertices.size(), Vec3{0, 0, 0});
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& t = mesh.faces[f];
        Vec3 n = cross(mesh.vertices[t[1]] - mesh.vertices[t[0]],
                       mesh.vertices[t[2]] - mesh.vertices[t[0]]);
        // |n| = 2 * area, so accumulating the raw cross product is the
        // area weighting.
        for (uint32_t idx : t) mesh.normals[idx] += n;
    }
    for (auto& n : mesh.normals) n = normalized(n);
}

}  // namespace funcmark
