#pragma once

#include <cstdint>
#include <vector>

#include "funcmark/field.hpp"
#include "funcmark/mesh.hpp"

namespace funcmark {

struct SampleSet {
    std::vector<Vec3> points;

    size_t count() const { return points.size(); }
};

// On-surface sampling by projection descent x <- x - F(x) grad F(x) from
// uniform candidates in [-1,1]^3. Deterministic given the seed.
SampleSet sample_surface(const ScalarField& field, size_t n, uint64_t seed,
                         double tol = 1e-6);

inline constexpr Vec3 kDefaultExtractionBoxMin{-1.05, -1.05, -1.05};
inline constexpr Vec3 kDefaultExtractionBoxMax{1.05, 1.05, 1.05};

// Zero-isosurface extraction on an r^3 node lattice. Edge vertices by linear
// interpolation; per-vertex normals from the field gradient. Throws
// EmptySurfaceError when the field has no sign change on the lattice.
TriangleMesh marching_cubes(const ScalarField& field, uint32_t resolution,
                            const Vec3& bbox_min = kDefaultExtractionBoxMin,
                            const Vec3& bbox_max = kDefaultExtractionBoxMax);

// Dual contouring: one vertex per intersected cell placed by minimizing the
// quadratic error of gradient-derived tangent planes; quads per crossed edge.
TriangleMesh dual_contouring(const ScalarField& field, uint32_t resolution,
                             const Vec3& bbox_min = kDefaultExtractionBoxMin,
                             const Vec3& bbox_max = kDefaultExtractionBoxMax);

}  // namespace funcmark
