#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "funcmark/mesh.hpp"
#include "funcmark/verify.hpp"

namespace funcmark {

// Distortion suite applied to extracted meshes. All stochastic variants are
// deterministic given the seed; every attack at its "zero" parameter is the
// identity.

TriangleMesh gaussian_noise(const TriangleMesh& mesh, double sigma, uint64_t seed);

// Exact similarity transform of vertices (normals rotated).
TriangleMesh affine(const TriangleMesh& mesh, const SimilarityTransform& t);

// Snap each coordinate to a uniform grid of 2^bits levels over the mesh bbox.
TriangleMesh quantize(const TriangleMesh& mesh, int bits);

// Quadric-error edge collapse removing the given fraction of vertices.
// Collapses respect the link condition, so the output stays manifold.
TriangleMesh simplify(const TriangleMesh& mesh, double fraction);

// Uniform-weight Laplacian smoothing: v <- v + lambda (centroid(N(v)) - v).
TriangleMesh smooth(const TriangleMesh& mesh, int iterations, double lambda = 0.5);

// Incremental isotropic remeshing: split long / collapse short / flip to
// valence 6 / tangential relaxation, projecting back to the INPUT surface.
TriangleMesh remesh(const TriangleMesh& mesh, double target_edge_length, int iterations = 3);

double mean_edge_length(const TriangleMesh& mesh);

// Parsed `name:arg1[:arg2]` attack description.
struct AttackSpec {
    enum class Kind { Gaussian, Rotate, Scale, Translate, Combined, Quantize, Simplify, Smooth, Remesh };
    Kind kind = Kind::Gaussian;
    double a = 0.0;  // first numeric argument
    double b = 0.0;  // second numeric argument (when present)
    bool has_b = false;

    // Grammar: gaussian:sigma | rotate:angle_deg | scale:factor |
    // translate:max_offset | combined | quantize:bits | simplify:fraction |
    // smooth:iterations[:lambda] | remesh:target_edge[:iterations]
    static AttackSpec parse(const std::string& text);
    std::string describe() const;
};

// Applies the parsed spec. Rotation axes and translation directions for the
// stochastic variants are drawn from the seed.
TriangleMesh apply_attack(const TriangleMesh& mesh, const AttackSpec& spec, uint64_t seed);

}  // namespace funcmark
