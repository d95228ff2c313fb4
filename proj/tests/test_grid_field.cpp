#include <doctest.h>

#include "funcmark/grid_field.hpp"
#include "funcmark/rng.hpp"
#include "oracles.hpp"

using namespace funcmark;
using namespace funcmark::test;

namespace {
const Vec3 kLo{-1.05, -1.05, -1.05};
const Vec3 kHi{1.05, 1.05, 1.05};
}

TEST_CASE("bake at 64^3 reproduces the sphere within 5e-3") {
    SphereField s({0, 0, 0}, 0.5);
    GridField g = bake_grid(s, {64, 64, 64}, kLo, kHi);
    Rng rng(201);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Vec3 p = rng.uniform_in_cube(0.9);
        worst = std::max(worst, std::fabs(g.eval(p) - s.eval(p)));
    }
    CHECK(worst <= 5e-3);
}

TEST_CASE("bake at 128^3 reproduces the sphere within 2e-3") {
    SphereField s({0, 0, 0}, 0.5);
    GridField g = bake_grid(s, {128, 128, 128}, kLo, kHi);
    Rng rng(202);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Vec3 p = rng.uniform_in_cube(0.9);
        worst = std::max(worst, std::fabs(g.eval(p) - s.eval(p)));
    }
    CHECK(worst <= 2e-3);
}

TEST_CASE("baking is deterministic") {
    SphereField s({0, 0, 0}, 0.5);
    GridField a = bake_grid(s, {32, 32, 32}, kLo, kHi);
    GridField b = bake_grid(s, {32, 32, 32}, kLo, kHi);
    CHECK(a.values() == b.values());
}

TEST_CASE("grid gradient matches analytic sphere normal") {
    SphereField s({0, 0, 0}, 0.5);
    GridField g = bake_grid(s, {96, 96, 96}, kLo, kHi);
    CHECK(norm(g.gradient({0, 0, 0.5}) - Vec3{0, 0, 1}) <= 1e-2);
}

TEST_CASE("grid gradient and hessian match finite differences of the grid") {
    SphereField s({0, 0, 0}, 0.5);
    GridField g = bake_grid(s, {64, 64, 64}, kLo, kHi);
    Rng rng(203);
    for (int i = 0; i < 100; ++i) {
        Vec3 p = rng.uniform_in_cube(0.8);
        Vec3 fd = fd_gradient([&](const Vec3& q) { return g.eval(q); }, p);
        CHECK(rel_err(g.gradient(p), fd) <= 1e-3);
        Mat3 fh = fd_jacobian([&](const Vec3& q) { return g.gradient(q); }, p);
        CHECK(rel_err(g.hessian(p), fh) <= 1e-2);
    }
}

TEST_CASE("queries outside the bbox raise OutOfDomainError") {
    SphereField s({0, 0, 0}, 0.5);
    GridField g = bake_grid(s, {16, 16, 16}, kLo, kHi);
    CHECK_THROWS_AS(g.eval({1.2, 0, 0}), OutOfDomainError);
    CHECK_THROWS_AS(g.gradient({0, -1.3, 0}), OutOfDomainError);
    CHECK_NOTHROW(g.eval({1.05, 1.05, 1.05}));  // closed box
}

TEST_CASE("translation consistency") {
    SphereField s({0, 0, 0}, 0.5);
    GridField a = bake_grid(s, {32, 32, 32}, kLo, kHi);
    Vec3 shift{0.5, -0.25, 1.0};
    SphereField s2({0.5, -0.25, 1.0}, 0.5);
    GridField b = bake_grid(s2, {32, 32, 32}, kLo + shift, kHi + shift);
    Rng rng(204);
    for (int i = 0; i < 100; ++i) {
        Vec3 p = rng.uniform_in_cube(0.9);
        CHECK(a.eval(p) == doctest::Approx(b.eval(p + shift)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate dims rejected") {
    SphereField s({0, 0, 0}, 0.5);
    CHECK_THROWS_AS(bake_grid(s, {4, 64, 64}, kLo, kHi), InvalidArgumentError);
    CHECK_THROWS_AS(bake_grid(s, {16, 16, 16}, kHi, kLo), InvalidArgumentError);
}
