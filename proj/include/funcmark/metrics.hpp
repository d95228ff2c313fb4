#pragma once

#include <cstdint>
#include <vector>

#include "funcmark/mesh.hpp"

namespace funcmark {

// Closest point on a triangle (Ericson's region walk).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Median-split BVH over a reference mesh for nearest-point queries.
class SurfaceQueryIndex {
public:
    explicit SurfaceQueryIndex(const TriangleMesh& mesh);

    struct Result {
        double distance = 0.0;
        Vec3 point;      // closest point on the surface
        size_t face = 0; // owning triangle
    };

    Result nearest(const Vec3& p) const;

private:
    struct Node {
        Vec3 lo, hi;
        int32_t left = -1, right = -1;  // children, or -1 for leaves
        uint32_t begin = 0, end = 0;    // triangle range for leaves
    };

    int32_t build(uint32_t begin, uint32_t end);
    void query(int32_t node, const Vec3& p, Result& best) const;

    const TriangleMesh& mesh_;
    std::vector<uint32_t> tri_order_;
    std::vector<Node> nodes_;
};

struct MeshSample {
    Vec3 point;
    Vec3 normal;
};

// Area-uniform surface samples with smoothly interpolated normals (vertex
// normals when present, face normals otherwise). Deterministic given seed.
std::vector<MeshSample> sample_mesh_surface(const TriangleMesh& mesh, size_t n, uint64_t seed);

// Symmetric mean nearest-neighbor distance between area-uniform sample sets.
double chamfer(const TriangleMesh& a, const TriangleMesh& b, size_t n_samples = 30000,
               uint64_t seed = 0);

// Mean exact point-to-surface distance.
double p2s(const std::vector<Vec3>& points, const TriangleMesh& reference);

// Symmetrized mean (1 - cos) between sample normals and the normals at their
// nearest points on the other mesh.
double normal_difference(const TriangleMesh& a, const TriangleMesh& b, size_t n_samples = 30000,
                         uint64_t seed = 0);

}  // namespace funcmark
