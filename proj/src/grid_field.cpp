#include "funcmark/grid_field.hpp"

#include <cmath>
#include <cstddef>

#include "funcmark/parallel.hpp"

namespace funcmark {

namespace {

constexpr double kPole = -0.26794919243112270647;  // sqrt(3) - 2

double initial_causal(const double* c, size_t n, size_t stride, double z) {
    // Mirror boundary, truncated at the pole's numerical horizon.
    size_t horizon = static_cast<size_t>(std::ceil(std::log(1e-14) / std::log(std::fabs(z))));
    horizon = std::min(horizon, n);
    double zn = z;
    double sum = c[0];
    for (size_t i = 1; i < horizon; ++i) {
        sum += zn * c[i * stride];
        zn *= z;
    }
    return sum;
}

double initial_anticausal(const double* c, size_t n, size_t stride, double z) {
    return (z / (z * z - 1.0)) * (z * c[(n - 2) * stride] + c[(n - 1) * stride]);
}

// In-place conversion of one lattice line of samples to B-spline coefficients.
void prefilter_line(double* c, size_t n, size_t stride) {
    if (n < 2) return;
    const double z = kPole;
    const double lambda = (1.0 - z) * (1.0 - 1.0 / z);
    for (size_t i = 0; i < n; ++i) c[i * stride] *= lambda;
    c[0] = initial_causal(c, n, stride, z);
    for (size_t i = 1; i < n; ++i) c[i * stride] += z * c[(i - 1) * stride];
    c[(n - 1) * stride] = initial_anticausal(c, n, stride, z);
    for (size_t i = n - 1; i-- > 0;) c[i * stride] = z * (c[(i + 1) * stride] - c[i * stride]);
}

inline void basis(double f, double w[4]) {
    double g = 1.0 - f;
    w[0] = g * g * g / 6.0;
    w[1] = (3.0 * f * f * f - 6.0 * f * f + 4.0) / 6.0;
    w[2] = (-3.0 * f * f * f + 3.0 * f * f + 3.0 * f + 1.0) / 6.0;
    w[3] = f * f * f / 6.0;
}

inline void basis_d1(double f, double w[4]) {
    double g = 1.0 - f;
    w[0] = -g * g / 2.0;
    w[1] = (3.0 * f * f - 4.0 * f) / 2.0;
    w[2] = (-3.0 * f * f + 2.0 * f + 1.0) / 2.0;
    w[3] = f * f / 2.0;
}

inline void basis_d2(double f, double w[4]) {
    w[0] = 1.0 - f;
    w[1] = 3.0 * f - 2.0;
    w[2] = 1.0 - 3.0 * f;
    w[3] = f;
}

inline int mirror(int i, int n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
    return i;
}

}  // namespace

GridField::GridField(std::array<uint32_t, 3> dims, const Vec3& bbox_min, const Vec3& bbox_max,
                     std::vector<float> values)
    : dims_(dims), bbox_min_(bbox_min), bbox_max_(bbox_max), values_(std::move(values)) {
    for (int a = 0; a < 3; ++a) {
        if (dims_[a] < 4) throw InvalidArgumentError("grid field: need at least 4 samples per axis");
        if (!(bbox_min_[a] < bbox_max_[a]))
            throw InvalidArgumentError("grid field: degenerate bounding box");
        spacing_[a] = (bbox_max_[a] - bbox_min_[a]) / (dims_[a] - 1);
    }
    size_t total = size_t(dims_[0]) * dims_[1] * dims_[2];
    if (values_.size() != total)
        throw InvalidArgumentError("grid field: value count does not match dims");

    // Prefilter in double, axis by axis, then round once to storage precision.
    std::vector<double> work(values_.begin(), values_.end());
    const size_t nx = dims_[0], ny = dims_[1], nz = dims_[2];
    parallel_for(0, ny * nz, [&](size_t i) {
        size_t y = i % ny, z = i / ny;
        prefilter_line(&work[z * nx * ny + y * nx], nx, 1);
    });
    parallel_for(0, nx * nz, [&](size_t i) {
        size_t x = i % nx, z = i / nx;
        prefilter_line(&work[z * nx * ny + x], ny, nx);
    });
    parallel_for(0, nx * ny, [&](size_t i) {
        prefilter_line(&work[i], nz, nx * ny);
    });
    coeffs_.assign(work.begin(), work.end());
}

bool GridField::contains(const Vec3& p) const {
    for (int a = 0; a < 3; ++a)
        if (p[a] < bbox_min_[a] || p[a] > bbox_max_[a]) return false;
    return true;
}

Vec3 GridField::local(const Vec3& p) const {
    if (!finite(p)) throw InvalidArgumentError("grid field: non-finite query point");
    if (!contains(p)) throw OutOfDomainError("grid field: query point outside bounding box");
    Vec3 t;
    for (int a = 0; a < 3; ++a) t[a] = (p[a] - bbox_min_[a]) / spacing_[a];
    return t;
}

double GridField::coeff(int i, int j, int k) const {
    i = mirror(i, static_cast<int>(dims_[0]));
    j = mirror(j, static_cast<int>(dims_[1]));
    k = mirror(k, static_cast<int>(dims_[2]));
    return coeffs_[(size_t(k) * dims_[1] + j) * dims_[0] + i];
}

double GridField::eval(const Vec3& p) const {
    Vec3 t = local(p);
    int b[3];
    double wx[4], wy[4], wz[4];
    for (int a = 0; a < 3; ++a) {
        b[a] = std::min(static_cast<int>(std::floor(t[a])), static_cast<int>(dims_[a]) - 2);
        b[a] = std::max(b[a], 0);
    }
    basis(t[0] - b[0], wx);
    basis(t[1] - b[1], wy);
    basis(t[2] - b[2], wz);
    double sum = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) {
            double w = wz[k] * wy[j];
            for (int i = 0; i < 4; ++i)
                sum += w * wx[i] * coeff(b[0] - 1 + i, b[1] - 1 + j, b[2] - 1 + k);
        }
    return sum;
}

Vec3 GridField::gradient(const Vec3& p) const {
    Vec3 t = local(p);
    int b[3];
    for (int a = 0; a < 3; ++a) {
        b[a] = std::min(static_cast<int>(std::floor(t[a])), static_cast<int>(dims_[a]) - 2);
        b[a] = std::max(b[a], 0);
    }
    double w[3][4], d[3][4];
    for (int a = 0; a < 3; ++a) {
        double f = t[a] - b[a];
        basis(f, w[a]);
        basis_d1(f, d[a]);
    }
    Vec3 g{0, 0, 0};
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 4; ++i) {
                double c = coeff(b[0] - 1 + i, b[1] - 1 + j, b[2] - 1 + k);
                g.x += c * d[0][i] * w[1][j] * w[2][k];
                g.y += c * w[0][i] * d[1][j] * w[2][k];
                g.z += c * w[0][i] * w[1][j] * d[2][k];
            }
    for (int a = 0; a < 3; ++a) g[a] /= spacing_[a];
    return g;
}

Mat3 GridField::hessian(const Vec3& p) const {
    Vec3 t = local(p);
    int b[3];
    for (int a = 0; a < 3; ++a) {
        b[a] = std::min(static_cast<int>(std::floor(t[a])), static_cast<int>(dims_[a]) - 2);
        b[a] = std::max(b[a], 0);
    }
    double w[3][4], d1[3][4], d2[3][4];
    for (int a = 0; a < 3; ++a) {
        double f = t[a] - b[a];
        basis(f, w[a]);
        basis_d1(f, d1[a]);
        basis_d2(f, d2[a]);
    }
    Mat3 h = Mat3::zero();
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 4; ++i) {
                double c = coeff(b[0] - 1 + i, b[1] - 1 + j, b[2] - 1 + k);
                h(0, 0) += c * d2[0][i] * w[1][j] * w[2][k];
                h(1, 1) += c * w[0][i] * d2[1][j] * w[2][k];
                h(2, 2) += c * w[0][i] * w[1][j] * d2[2][k];
                h(0, 1) += c * d1[0][i] * d1[1][j] * w[2][k];
                h(0, 2) += c * d1[0][i] * w[1][j] * d1[2][k];
                h(1, 2) += c * w[0][i] * d1[1][j] * d1[2][k];
            }
    h(0, 0) /= spacing_[0] * spacing_[0];
    h(1, 1) /= spacing_[1] * spacing_[1];
    h(2, 2) /= spacing_[2] * spacing_[2];
    h(0, 1) /= spacing_[0] * spacing_[1];
    h(0, 2) /= spacing_[0] * spacing_[2];
    h(1, 2) /= spacing_[1] * spacing_[2];
    h(1, 0) = h(0, 1);
    h(2, 0) = h(0, 2);
    h(2, 1) = h(1, 2);
    return h;
}

GridField bake_grid(const ScalarField& field, std::array<uint32_t, 3> dims,
                    const Vec3& bbox_min, const Vec3& bbox_max) {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 8) throw InvalidArgumentError("bake_grid: need at least 8 samples per axis");
        if (!(bbox_min[a] < bbox_max[a]))
            throw InvalidArgumentError("bake_grid: degenerate bounding box");
    }
    const size_t nx = dims[0], ny = dims[1], nz = dims[2];
    Vec3 h;
    for (int a = 0; a < 3; ++a) h[a] = (bbox_max[a] - bbox_min[a]) / (dims[a] - 1);
    std::vector<float> values(nx * ny * nz);
    parallel_for(0, nz, [&](size_t z) {
        for (size_t y = 0; y < ny; ++y)
            for (size_t x = 0; x < nx; ++x) {
                Vec3 p{bbox_min.x + x * h.x, bbox_min.y + y * h.y, bbox_min.z + z * h.z};
                values[(z * ny + y) * nx + x] = static_cast<float>(field.eval(p));
            }
    });
    return GridField(dims, bbox_min, bbox_max, std::move(values));
}

}  // namespace funcmark
