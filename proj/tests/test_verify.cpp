#include <doctest.h>

#include "funcmark/embed.hpp"
#include "funcmark/rng.hpp"
#include "funcmark/shapes.hpp"
#include "funcmark/surface.hpp"
#include "funcmark/verify.hpp"

using namespace funcmark;

namespace {

std::vector<uint8_t> test_message() {
    return {1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1};
}

PartitionLayout test_layout(double delta = 0.001) {
    return PartitionLayout(32, test_message(), delta);
}

}  // namespace

TEST_CASE("tag_points: sign rule") {
    auto sphere = make_shape("sphere");
    PartitionLayout l = test_layout();
    Vec3 dir = normalized(Vec3{0.4, 0.3, 0.5});
    TagResult r = tag_points({dir * 0.5004, dir * 0.4996, {0, 0, 0}}, *sphere, l);
    REQUIRE(r.tags.size() == 2);  // origin skipped
    CHECK(r.skipped == 1);
    CHECK(r.tags[0].bit == 1);
    CHECK(r.tags[1].bit == 0);
    CHECK(r.tags[0].partition == partition_of(dir, l));
}

TEST_CASE("decode: majority, tie, and undecodable rules") {
    // Hand-built tallies via points in two known partitions of a tiny layout.
    auto sphere = make_shape("sphere");
    PartitionLayout l(2, {1, 0, 1, 1}, 0.001);
    // partition (1,1): theta in (pi/2, pi), phi in (0, pi) -> bit message[3]=1
    Vec3 in_11 = sph_to_cart({1.0, 0.75 * M_PI, 0.5 * M_PI});
    // three points: two outside (bit 1), one inside (bit 0) -> majority 1
    DecodeResult r = decode({in_11 * 0.52, in_11 * 0.51, in_11 * 0.49}, *sphere, l);
    int flat = l.flat_index({1, 1});
    REQUIRE(r.partition_bits[flat].has_value());
    CHECK(*r.partition_bits[flat] == 1);
    CHECK(r.bit_accuracy == 1.0);

    // tie -> undecodable
    DecodeResult tie = decode({in_11 * 0.52, in_11 * 0.49,
                               sph_to_cart({0.52, 0.25 * M_PI, 0.5 * M_PI})},
                              *sphere, l);
    CHECK_FALSE(tie.partition_bits[flat].has_value());
}

TEST_CASE("decode: zero decodable partitions raises UndecodableMessageError") {
    auto sphere = make_shape("sphere");
    PartitionLayout l = test_layout();
    // two opposite-sign points in the same partition: tie everywhere
    Vec3 dir = normalized(Vec3{0.4, 0.3, 0.5});
    CHECK_THROWS_AS(decode({dir * 0.52, dir * 0.48}, *sphere, l), UndecodableMessageError);
}

TEST_CASE("decode on exact deformed samples: noiseless channel accuracy 1.0") {
    for (const char* shape : {"sphere", "torus", "blend"}) {
        auto f = make_shape(shape);
        PartitionLayout l = test_layout();
        SampleSet pts = sample_surface(*f, 2000, 42);
        std::vector<Vec3> deformed;
        for (const Vec3& y : pts.points)
            if (window(y, l) > 0.1 * l.delta) deformed.push_back(deform(y, *f, l));
        DecodeResult r = decode(deformed, *f, l);
        CHECK(r.bit_accuracy == 1.0);
    }
}

TEST_CASE("decode aggregates repeated partitions into the message estimate") {
    auto sphere = make_shape("sphere");
    PartitionLayout l = test_layout();
    SampleSet pts = sample_surface(*sphere, 3000, 43);
    std::vector<Vec3> deformed;
    for (const Vec3& y : pts.points)
        if (window(y, l) > 0.1 * l.delta) deformed.push_back(deform(y, *sphere, l));
    DecodeResult r = decode(deformed, *sphere, l);
    for (size_t b = 0; b < l.message.size(); ++b) {
        REQUIRE(r.message[b].has_value());
        CHECK(*r.message[b] == l.message[b]);
    }
}

TEST_CASE("z threshold: standard normal quantiles") {
    CHECK(z_threshold(0.001) == doctest::Approx(3.0902).epsilon(1e-3));
    CHECK(z_threshold(0.05) == doctest::Approx(1.6449).epsilon(1e-3));
    CHECK(z_threshold(0.5) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK_THROWS_AS(z_threshold(0.0), InvalidArgumentError);
}

TEST_CASE("detect: z formula and verdicts") {
    auto sphere = make_shape("sphere");
    PartitionLayout l = test_layout();
    // all-match set: deformed samples
    SampleSet pts = sample_surface(*sphere, 100, 44);
    std::vector<Vec3> deformed;
    for (const Vec3& y : pts.points)
        if (window(y, l) > 0.1 * l.delta) deformed.push_back(deform(y, *sphere, l));
    DetectionReport r = detect(deformed, *sphere, l);
    CHECK(r.matches == r.n_points);
    double nv = double(r.n_points);
    CHECK(r.z_score == doctest::Approx(2.0 * (nv - nv / 2) / std::sqrt(nv)));
    CHECK(r.reject_h0);
    CHECK(r.threshold == doctest::Approx(3.0902).epsilon(1e-3));
}

TEST_CASE("detect: s = N/2 gives z = 0 and accepts H0") {
    auto sphere = make_shape("sphere");
    PartitionLayout l(2, {1, 0, 1, 1}, 0.001);
    // one match and one mismatch in partition (1,1) (bit 1)
    Vec3 in_11 = sph_to_cart({1.0, 0.75 * M_PI, 0.5 * M_PI});
    DetectionReport r = detect({in_11 * 0.51, in_11 * 0.49}, *sphere, l);
    CHECK(r.z_score == doctest::Approx(0.0));
    CHECK_FALSE(r.reject_h0);
}

TEST_CASE("detect: verdict invariant under point permutation") {
    auto sphere = make_shape("sphere");
    PartitionLayout l = test_layout();
    SampleSet pts = sample_surface(*sphere, 200, 45);
    std::vector<Vec3> fwd;
    for (const Vec3& y : pts.points) fwd.push_back(deform(y, *sphere, l));
    std::vector<Vec3> rev(fwd.rbegin(), fwd.rend());
    DetectionReport a = detect(fwd, *sphere, l);
    DetectionReport b = detect(rev, *sphere, l);
    CHECK(a.matches == b.matches);
    CHECK(a.z_score == b.z_score);
    CHECK(a.reject_h0 == b.reject_h0);
}

TEST_CASE("detect: z monotone in matches for fixed N") {
    // synthetic: vary matches via points in a bit-1 partition
    auto sphere = make_shape("sphere");
    PartitionLayout l(2, {1, 0, 1, 1}, 0.001);
    Vec3 in_11 = sph_to_cart({1.0, 0.75 * M_PI, 0.5 * M_PI});
    double prev = -1e9;
    for (int matches = 0; matches <= 10; ++matches) {
        std::vector<Vec3> pts;
        for (int i = 0; i < matches; ++i) pts.push_back(in_11 * (0.51 + 1e-5 * i));
        for (int i = matches; i < 10; ++i) pts.push_back(in_11 * (0.49 - 1e-5 * i));
        DetectionReport r = detect(pts, *sphere, l);
        CHECK(r.z_score > prev);
        prev = r.z_score;
    }
}

TEST_CASE("null calibration: false positive rate at alpha=0.001") {
    // Null model: points measured around a non-watermarked surface. Exactly
    // on-surface points have degenerate sign, so jitter symmetrically along
    // the normal (measurement noise) as a real suspect point set would be.
    auto sphere = make_shape("sphere");
    Rng rng(46);
    int rejects = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::vector<uint8_t> msg(16);
        for (auto& b : msg) b = uint8_t(rng.next_u64() & 1);
        PartitionLayout l(32, msg, 0.001);
        std::vector<Vec3> pts;
        for (const Vec3& s : sample_surface(*sphere, 50, 1000 + t).points)
            pts.push_back(s + sphere->gradient(s) * rng.uniform(-0.001, 0.001));
        if (detect(pts, *sphere, l).reject_h0) ++rejects;
    }
    CHECK(rejects <= 5);
}

TEST_CASE("similarity transform: apply then invert is identity") {
    Rng rng(47);
    for (int t = 0; t < 100; ++t) {
        SimilarityTransform s;
        s.scale = rng.uniform(0.5, 2.0);
        s.axis = rng.uniform_direction();
        s.angle = rng.uniform(-M_PI, M_PI);
        s.translation = rng.uniform_in_cube(0.5);
        Vec3 p = rng.uniform_in_cube(1.0);
        CHECK(norm(s.apply_inverse(s.apply(p)) - p) <= 1e-9);
    }
}

TEST_CASE("align: identity recovery on an already-aligned mesh") {
    // The asymmetric blend shape: a sphere's rotation is only constrained by
    // the delta-sized watermark ripples, which sit below the bake noise.
    auto blend = make_shape("blend");
    PartitionLayout l = test_layout();
    WatermarkedField wf(blend, l);
    GridField grid = bake_watermarked(wf, {64, 64, 64}, {-1.05, -1.05, -1.05}, {1.05, 1.05, 1.05});
    TriangleMesh mesh = marching_cubes(grid, 64);
    AlignmentResult r = align(mesh, grid);
    CHECK(std::fabs(r.transform.scale - 1.0) <= 1e-3);
    CHECK(std::fabs(r.transform.angle) <= 0.5 * M_PI / 180.0);
    CHECK(norm(r.transform.translation) <= 1e-3);
}

TEST_CASE("align: unrelated mesh fails") {
    auto sphere = make_shape("sphere");
    PartitionLayout l = test_layout();
    WatermarkedField wf(sphere, l);
    GridField grid = bake_watermarked(wf, {48, 48, 48}, {-1.05, -1.05, -1.05}, {1.05, 1.05, 1.05});
    auto torus = make_shape("torus");
    TriangleMesh unrelated = marching_cubes(*torus, 48);
    CHECK_THROWS_AS(align(unrelated, grid), AlignmentFailedError);
}
