#include "funcmark/embed.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "funcmark/parallel.hpp"
#include "funcmark/rng.hpp"

namespace funcmark {

namespace {
constexpr double kMinRadius = 1e-12;
constexpr double kSingularDet = 1e-12;
}

void NewtonConfig::validate() const {
    if (!(tolerance > 0.0)) throw InvalidArgumentError("newton: tolerance must be positive");
    if (max_iterations < 1) throw InvalidArgumentError("newton: max_iterations must be >= 1");
    if (batch_size < 1) throw InvalidArgumentError("newton: batch_size must be >= 1");
}

Vec3 deform(const Vec3& y, const ScalarField& base, const PartitionLayout& layout) {
    if (norm(y) < kMinRadius) return y;
    double c = window(y, layout);
    if (c == 0.0) return y;
    uint8_t bit = bit_of_partition(partition_of(y, layout), layout);
    double sign = bit ? 1.0 : -1.0;
    return y + base.gradient(y) * (sign * c);
}

Mat3 deform_jacobian(const Vec3& y, const ScalarField& base, const PartitionLayout& layout) {
    if (norm(y) < kMinRadius) return Mat3::identity();
    double c = window(y, layout);
    Vec3 grad_c;
    try {
        grad_c = window_gradient(y, layout);
    } catch (const SingularDirectionError&) {
        grad_c = {0, 0, 0};  // declared z-axis convention
    }
    uint8_t bit = bit_of_partition(partition_of(y, layout), layout);
    double sign = bit ? 1.0 : -1.0;
    Mat3 m = base.hessian(y) * c + outer(base.gradient(y), grad_c);
    return Mat3::identity() + m * sign;
}

namespace {

// One Newton run; returns the iterate when |D(y) - x| converges.
std::optional<Vec3> newton_from(const Vec3& start, const Vec3& x, const ScalarField& base,
                                const PartitionLayout& layout, const NewtonConfig& cfg,
                                double* residual_out) {
    Vec3 y = start;
    double bound = 10.0 * cfg.tolerance;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        Vec3 r = deform(y, base, layout) - x;
        double rn = norm(r);
        if (residual_out) *residual_out = rn;
        if (rn <= bound) return y;
        Mat3 j = deform_jacobian(y, base, layout);
        if (std::fabs(j.det()) < kSingularDet) return std::nullopt;
        y = y - inverse(j) * r;
        if (!finite(y)) return std::nullopt;
    }
    Vec3 r = deform(y, base, layout) - x;
    double rn = norm(r);
    if (residual_out) *residual_out = rn;
    if (rn <= bound) return y;
    return std::nullopt;
}

}  // namespace

Vec3 invert_deform(const Vec3& x, const ScalarField& base, const PartitionLayout& layout,
                   const NewtonConfig& cfg) {
    if (!finite(x)) throw InvalidArgumentError("invert_deform: non-finite query point");
    cfg.validate();

    double best_residual = std::numeric_limits<double>::infinity();
    double residual = 0.0;

    // The query point is an excellent start: |D(x) - x| <= delta near the
    // surface. The seeded batch only runs when it fails.
    if (auto y = newton_from(x, x, base, layout, cfg, &residual)) return *y;
    best_residual = std::min(best_residual, residual);

    Rng rng(cfg.seed);
    std::optional<Vec3> best;
    double best_converged = std::numeric_limits<double>::infinity();
    for (int i = 1; i < cfg.batch_size; ++i) {
        Vec3 start = rng.uniform_in_cube(1.0);
        if (auto y = newton_from(start, x, base, layout, cfg, &residual)) {
            double rn = norm(deform(*y, base, layout) - x);
            if (rn < best_converged) {
                best_converged = rn;
                best = *y;
            }
        }
        best_residual = std::min(best_residual, residual);
    }
    if (best) return *best;
    throw NonConvergenceError("invert_deform: no Newton start converged", best_residual);
}

WatermarkedField::WatermarkedField(std::shared_ptr<const ScalarField> base,
                                   PartitionLayout layout, NewtonConfig newton)
    : base_(std::move(base)), layout_(std::move(layout)), newton_(newton) {
    if (!base_) throw InvalidArgumentError("watermarked field: null base field");
    newton_.validate();
}

double WatermarkedField::eval(const Vec3& x) const {
    return base_->eval(invert_deform(x, *base_, layout_, newton_));
}

Vec3 WatermarkedField::gradient(const Vec3& x) const {
    Vec3 y = invert_deform(x, *base_, layout_, newton_);
    Mat3 j = deform_jacobian(y, *base_, layout_);
    if (std::fabs(j.det()) < kSingularDet)
        throw SingularJacobianError("watermarked gradient: deformation Jacobian singular");
    // grad G(x) = J_D(y)^-T grad F(y), the chain rule through y = D^-1(x).
    return inverse(j.transposed()) * base_->gradient(y);
}

Mat3 WatermarkedField::hessian(const Vec3& x) const {
    // Analytic form would need third derivatives of F; central differences of
    // the analytic gradient are accurate enough for every downstream use.
    const double h = 1e-5;
    Mat3 m;
    for (int a = 0; a < 3; ++a) {
        Vec3 dp = x, dm = x;
        dp[a] += h;
        dm[a] -= h;
        Vec3 d = (gradient(dp) - gradient(dm)) / (2.0 * h);
        for (int b = 0; b < 3; ++b) m(b, a) = d[b];
    }
    // Symmetrize; the finite-difference estimate is not exactly symmetric.
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            double v = 0.5 * (m(a, b) + m(b, a));
            m(a, b) = m(b, a) = v;
        }
    return m;
}

GridField bake_watermarked(const WatermarkedField& wf, std::array<uint32_t, 3> dims,
                           const Vec3& bbox_min, const Vec3& bbox_max, BakeReport* report) {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 8)
            throw InvalidArgumentError("bake_watermarked: need at least 8 samples per axis");
        if (!(bbox_min[a] < bbox_max[a]))
            throw InvalidArgumentError("bake_watermarked: degenerate bounding box");
    }
    const size_t nx = dims[0], ny = dims[1], nz = dims[2];
    Vec3 h;
    for (int a = 0; a < 3; ++a) h[a] = (bbox_max[a] - bbox_min[a]) / (dims[a] - 1);
    std::vector<float> values(nx * ny * nz);
    std::vector<size_t> failures(nz, 0);
    parallel_for(0, nz, [&](size_t z) {
        for (size_t y = 0; y < ny; ++y)
            for (size_t x = 0; x < nx; ++x) {
                Vec3 p{bbox_min.x + x * h.x, bbox_min.y + y * h.y, bbox_min.z + z * h.z};
                double v;
                try {
                    v = wf.eval(p);
                } catch (const NonConvergenceError&) {
                    v = wf.base().eval(p);
                    ++failures[z];
                }
                values[(z * ny + y) * nx + x] = static_cast<float>(v);
            }
    });
    if (report) {
        report->total_nodes = nx * ny * nz;
        report->newton_failures = 0;
        for (size_t f : failures) report->newton_failures += f;
    }
    return GridField(dims, bbox_min, bbox_max, std::move(values));
}

}  // namespace funcmark
