#pragma once

#include <cmath>
#include <functional>

#include "funcmark/field.hpp"

namespace funcmark::test {

// Central finite differences — the independent oracle for every analytic
// derivative in the library.
inline Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& p,
                        double h = 1e-4) {
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
        Vec3 lo = p, hi = p;
        lo[a] -= h;
        hi[a] += h;
        g[a] = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

inline Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& p,
                        double h = 1e-5) {
    Mat3 j;
    for (int c = 0; c < 3; ++c) {
        Vec3 lo = p, hi = p;
        lo[c] -= h;
        hi[c] += h;
        Vec3 d = (f(hi) - f(lo)) / (2.0 * h);
        for (int r = 0; r < 3; ++r) j(r, c) = d[r];
    }
    return j;
}

inline double rel_err(const Vec3& got, const Vec3& want) {
    double scale = std::max(norm(want), 1e-12);
    return norm(got - want) / scale;
}

inline double rel_err(const Mat3& got, const Mat3& want) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 9; ++i) {
        num += (got.m[i] - want.m[i]) * (got.m[i] - want.m[i]);
        den += want.m[i] * want.m[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

}  // namespace funcmark::test
