#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "funcmark/field.hpp"
#include "funcmark/mesh.hpp"
#include "funcmark/partition.hpp"

namespace funcmark {

struct PointTag {
    PartitionIndex partition;
    uint8_t bit = 0;
};

struct TagResult {
    std::vector<PointTag> tags;
    size_t skipped = 0;  // origin-direction points with no partition
};

// Tags each point with the sign bit of F (1 if F > 0 else 0) and its
// partition. Points too close to the origin to have a direction are skipped.
TagResult tag_points(const std::vector<Vec3>& points, const ScalarField& base,
                     const PartitionLayout& layout);

struct PartitionTally {
    uint32_t count_1 = 0;
    uint32_t count_0 = 0;

    bool decodable() const { return count_1 != count_0; }
    uint8_t majority() const { return count_1 > count_0 ? 1 : 0; }
};

struct DecodeResult {
    // One entry per partition (n_s * n_s, flat index). Empty optional means
    // undecodable (empty or tied).
    std::vector<std::optional<uint8_t>> partition_bits;
    std::vector<PartitionTally> tallies;
    double bit_accuracy = 0.0;  // over decodable partitions only
    size_t decodable_partitions = 0;
    // Message estimate: per message bit, majority across its decodable
    // partition repetitions; empty optional if none decode.
    std::vector<std::optional<uint8_t>> message;
};

// Per-partition majority decoding against the embedded layout.
// Throws UndecodableMessageError when no partition is decodable.
DecodeResult decode(const std::vector<Vec3>& points, const ScalarField& base,
                    const PartitionLayout& layout);

struct DetectionReport {
    size_t n_points = 0;  // N_v
    size_t matches = 0;   // s
    double z_score = 0.0;
    double alpha = 0.0;
    double threshold = 0.0;
    bool reject_h0 = false;
    std::vector<std::optional<uint8_t>> decoded_bits;  // per partition
    double bit_accuracy = 0.0;
    std::vector<PartitionTally> tallies;
};

// One-sided z-test of Eq. "s matches out of N_v" against chance.
// z = 2(s - N_v/2)/sqrt(N_v); reject H0 iff z > threshold(alpha).
DetectionReport detect(const std::vector<Vec3>& points, const ScalarField& base,
                       const PartitionLayout& layout, double alpha = 0.001);

// Upper-tail standard-normal quantile (e.g. 3.0902 at alpha = 0.001).
double z_threshold(double alpha);

struct SimilarityTransform {
    double scale = 1.0;
    double angle = 0.0;       // radians
    Vec3 axis{0.0, 0.0, 1.0}; // unit rotation axis
    Vec3 translation{0.0, 0.0, 0.0};

    Vec3 apply(const Vec3& v) const;
    Vec3 apply_inverse(const Vec3& v) const;
    Mat3 rotation() const;
};

struct AlignmentResult {
    SimilarityTransform transform;
    double residual = 0.0;  // final mean |G| over all vertices
    TriangleMesh aligned;
};

struct AlignConfig {
    size_t coarse_subsample = 2000;
    int refine_starts = 5;      // best K coarse cells seeding the fine stage
    int refine_iterations = 300;
    double max_residual = 0.05; // above this the mesh is declared unrelated
};

// Coarse-to-fine similarity alignment of a suspect mesh to the watermarked
// field: grid search over scale/rotation/translation scored by mean |G|,
// then finite-difference gradient descent from the best coarse cells.
// Throws AlignmentFailedError when the final residual exceeds max_residual.
AlignmentResult align(const TriangleMesh& mesh, const ScalarField& wm_field,
                      const AlignConfig& cfg = {});

}  // namespace funcmark
