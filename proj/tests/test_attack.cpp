#include <doctest.h>

#include <map>
#include <set>

#include "funcmark/attack.hpp"
#include "funcmark/shapes.hpp"
#include "funcmark/surface.hpp"

using namespace funcmark;

namespace {

TriangleMesh sphere_mesh(uint32_t res = 48) {
    auto sphere = make_shape("sphere");
    return marching_cubes(*sphere, res);
}

}  // namespace

TEST_CASE("zero-parameter attacks are the identity") {
    TriangleMesh m = sphere_mesh();
    CHECK(gaussian_noise(m, 0.0, 1).vertices == m.vertices);
    CHECK(affine(m, SimilarityTransform{}).vertices == m.vertices);
    CHECK(smooth(m, 0).vertices == m.vertices);
    CHECK(simplify(m, 0.0).vertices == m.vertices);
    CHECK(remesh(m, 0.05, 0).vertices == m.vertices);
}

TEST_CASE("gaussian noise: seed-deterministic, correct magnitude") {
    TriangleMesh m = sphere_mesh();
    TriangleMesh a = gaussian_noise(m, 0.01, 5);
    TriangleMesh b = gaussian_noise(m, 0.01, 5);
    CHECK(a.vertices == b.vertices);
    TriangleMesh c = gaussian_noise(m, 0.01, 6);
    CHECK(a.vertices != c.vertices);

    double var = 0.0;
    for (size_t i = 0; i < m.vertices.size(); ++i) var += norm2(a.vertices[i] - m.vertices[i]);
    var /= 3.0 * m.vertices.size();
    CHECK(std::sqrt(var) == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("affine: exact similarity transform") {
    TriangleMesh m = sphere_mesh();
    SimilarityTransform t;
    t.scale = 1.2;
    t.axis = normalized(Vec3{1, 2, 3});
    t.angle = 0.7;
    t.translation = {0.05, -0.02, 0.01};
    TriangleMesh out = affine(m, t);
    for (size_t i = 0; i < m.vertices.size(); ++i)
        CHECK(norm(out.vertices[i] - t.apply(m.vertices[i])) < 1e-15);
    // normals rotate but do not scale
    for (const Vec3& n : out.normals) CHECK(norm(n) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quantize: snaps to the stated grid") {
    TriangleMesh m = sphere_mesh();
    TriangleMesh q = quantize(m, 8);
    Vec3 lo, hi;
    m.bbox(lo, hi);
    double levels = 255.0;
    for (const Vec3& v : q.vertices)
        for (int a = 0; a < 3; ++a) {
            double step = (v[a] - lo[a]) / (hi[a] - lo[a]) * levels;
            CHECK(std::fabs(step - std::round(step)) < 1e-6);
        }
    // bits=32: displacement below the grid step
    TriangleMesh q32 = quantize(m, 32);
    for (size_t i = 0; i < m.vertices.size(); ++i)
        CHECK(norm(q32.vertices[i] - m.vertices[i]) <= 1e-8);
    CHECK_THROWS_AS(quantize(m, 0), InvalidArgumentError);
    CHECK_THROWS_AS(quantize(m, 33), InvalidArgumentError);
}

TEST_CASE("smooth: one uniform Laplacian step shrinks a sphere slightly") {
    TriangleMesh m = sphere_mesh();
    TriangleMesh s = smooth(m, 1);
    REQUIRE(s.vertices.size() == m.vertices.size());
    double before = 0.0, after = 0.0;
    for (size_t i = 0; i < m.vertices.size(); ++i) {
        before += norm(m.vertices[i]);
        after += norm(s.vertices[i]);
    }
    CHECK(after < before);
    CHECK(after / m.vertices.size() > 0.45);  // gentle, not collapsed
}

TEST_CASE("simplify: removes the requested vertex fraction, stays manifold") {
    TriangleMesh m = sphere_mesh();
    TriangleMesh s = simplify(m, 0.3);
    s.validate();
    CHECK(s.vertices.size() <= size_t(m.vertices.size() * 0.72));
    CHECK(s.vertices.size() >= size_t(m.vertices.size() * 0.60));
    // watertightness preserved by link-condition collapses
    std::map<std::pair<uint32_t, uint32_t>, int> count;
    for (const auto& f : s.faces)
        for (int e = 0; e < 3; ++e) {
            uint32_t a = f[e], b = f[(e + 1) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
        }
    for (auto& [edge, c] : count) CHECK(c == 2);
    // geometry stays near the sphere
    for (const Vec3& v : s.vertices) CHECK(std::fabs(norm(v) - 0.5) < 0.05);

    TriangleMesh deep = simplify(m, 0.9);
    deep.validate();
    CHECK(deep.vertices.size() < size_t(m.vertices.size() * 0.15));
}

TEST_CASE("remesh: equalizes edge lengths, new vertex positions") {
    TriangleMesh m = sphere_mesh();
    double target = mean_edge_length(m);
    TriangleMesh r = remesh(m, target);
    r.validate();
    // < 1% of output vertices coincide with input vertices
    std::set<std::array<long, 3>> input;
    for (const Vec3& v : m.vertices)
        input.insert({long(v.x * 1e9), long(v.y * 1e9), long(v.z * 1e9)});
    size_t coincident = 0;
    for (const Vec3& v : r.vertices)
        if (input.count({long(v.x * 1e9), long(v.y * 1e9), long(v.z * 1e9)})) ++coincident;
    CHECK(coincident < r.vertices.size() / 100 + 1);
    // projection keeps it on the input surface
    for (const Vec3& v : r.vertices) CHECK(std::fabs(norm(v) - 0.5) < 0.02);
}

TEST_CASE("remesh rejects non-manifold input") {
    TriangleMesh bad;
    bad.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    bad.faces = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};  // edge (0,1) on three faces
    CHECK_THROWS_AS(remesh(bad, 0.5), InvalidMeshError);
}

TEST_CASE("attack spec grammar") {
    AttackSpec g = AttackSpec::parse("gaussian:0.005");
    CHECK(g.kind == AttackSpec::Kind::Gaussian);
    CHECK(g.a == doctest::Approx(0.005));

    AttackSpec sm = AttackSpec::parse("smooth:3:0.7");
    CHECK(sm.kind == AttackSpec::Kind::Smooth);
    CHECK(sm.a == doctest::Approx(3));
    CHECK(sm.b == doctest::Approx(0.7));
    CHECK(sm.describe() == "smooth:3:0.7");

    CHECK(AttackSpec::parse("combined").kind == AttackSpec::Kind::Combined);
    CHECK_THROWS_AS(AttackSpec::parse("melt:1"), InvalidArgumentError);
    CHECK_THROWS_AS(AttackSpec::parse("gaussian:x"), InvalidArgumentError);
    CHECK_THROWS_AS(AttackSpec::parse("gaussian"), InvalidArgumentError);
}

TEST_CASE("apply_attack is seed-deterministic for stochastic variants") {
    TriangleMesh m = sphere_mesh();
    for (const char* spec : {"rotate:90", "translate:0.1", "combined"}) {
        TriangleMesh a = apply_attack(m, AttackSpec::parse(spec), 3);
        TriangleMesh b = apply_attack(m, AttackSpec::parse(spec), 3);
        CHECK(a.vertices == b.vertices);
    }
}
