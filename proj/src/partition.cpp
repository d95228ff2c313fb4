#include "funcmark/partition.hpp"

#include <algorithm>
#include <cmath>

namespace funcmark {

namespace {
constexpr double kMinRadius = 1e-12;
constexpr double kAxisSin = 1e-9;  // sin(theta) below this counts as on-axis
}

SphericalCoord cart_to_sph(const Vec3& p) {
    if (!finite(p)) throw InvalidArgumentError("cart_to_sph: non-finite point");
    SphericalCoord s;
    s.r = norm(p);
    if (s.r < kMinRadius) return s;  // (0, 0, 0) by convention
    s.theta = std::acos(std::clamp(p.z / s.r, -1.0, 1.0));
    s.phi = std::atan2(p.y, p.x);
    return s;
}

Vec3 sph_to_cart(const SphericalCoord& s) {
    double st = std::sin(s.theta);
    return {s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi), s.r * std::cos(s.theta)};
}

PartitionLayout::PartitionLayout(int n_s_, std::vector<uint8_t> message_, double delta_)
    : n_s(n_s_), message(std::move(message_)), delta(delta_) {
    if (n_s < 1) throw InvalidArgumentError("layout: n_s must be positive");
    if (message.empty()) throw InvalidArgumentError("layout: message must be non-empty");
    if (!(delta >= 0.0)) throw InvalidArgumentError("layout: delta must be non-negative");
    for (uint8_t b : message)
        if (b > 1) throw InvalidArgumentError("layout: message entries must be bits");
}

PartitionIndex partition_of(const Vec3& p, const PartitionLayout& layout) {
    SphericalCoord s = cart_to_sph(p);
    if (s.r < kMinRadius)
        throw UndefinedDirectionError("partition_of: direction undefined at the origin");
    int n = layout.n_s;
    int i = static_cast<int>(std::floor(s.theta * n / M_PI));
    int j = static_cast<int>(std::floor((s.phi + M_PI) * n / (2.0 * M_PI)));
    return {std::clamp(i, 0, n - 1), std::clamp(j, 0, n - 1)};
}

namespace {

// Quadratic factor q(t) = (hi - t)(t - lo)/(hi - lo)^2 and its derivative.
inline double cell_quadratic(double t, double lo, double hi, double* dq = nullptr) {
    double span = hi - lo;
    double q = (hi - t) * (t - lo) / (span * span);
    if (dq) *dq = (lo + hi - 2.0 * t) / (span * span);
    return q;
}

}  // namespace

double window(const Vec3& p, const PartitionLayout& layout) {
    SphericalCoord s = cart_to_sph(p);
    if (s.r < kMinRadius)
        throw UndefinedDirectionError("window: direction undefined at the origin");
    PartitionIndex idx = partition_of(p, layout);
    int n = layout.n_s;
    double th_lo = idx.i * M_PI / n, th_hi = (idx.i + 1) * M_PI / n;
    double ph_lo = -M_PI + idx.j * 2.0 * M_PI / n, ph_hi = ph_lo + 2.0 * M_PI / n;
    double qt = cell_quadratic(s.theta, th_lo, th_hi);
    double qp = cell_quadratic(s.phi, ph_lo, ph_hi);
    return 16.0 * layout.delta * qt * qp;
}

Vec3 window_gradient(const Vec3& p, const PartitionLayout& layout) {
    SphericalCoord s = cart_to_sph(p);
    if (s.r < kMinRadius)
        throw UndefinedDirectionError("window_gradient: direction undefined at the origin");
    double st = std::sin(s.theta);
    if (st < kAxisSin)
        throw SingularDirectionError("window_gradient: azimuth gradient singular on the z-axis");

    PartitionIndex idx = partition_of(p, layout);
    int n = layout.n_s;
    double th_lo = idx.i * M_PI / n, th_hi = (idx.i + 1) * M_PI / n;
    double ph_lo = -M_PI + idx.j * 2.0 * M_PI / n, ph_hi = ph_lo + 2.0 * M_PI / n;

    double dqt, dqp;
    double qt = cell_quadratic(s.theta, th_lo, th_hi, &dqt);
    double qp = cell_quadratic(s.phi, ph_lo, ph_hi, &dqp);
    double dC_dtheta = 16.0 * layout.delta * dqt * qp;
    double dC_dphi = 16.0 * layout.delta * qt * dqp;

    double ct = std::cos(s.theta);
    double cp = std::cos(s.phi), sp = std::sin(s.phi);
    Vec3 grad_theta{ct * cp / s.r, ct * sp / s.r, -st / s.r};
    Vec3 grad_phi{-sp / (s.r * st), cp / (s.r * st), 0.0};
    return dC_dtheta * grad_theta + dC_dphi * grad_phi;
}

uint8_t bit_of_partition(PartitionIndex idx, const PartitionLayout& layout) {
    size_t flat = static_cast<size_t>(layout.flat_index(idx));
    return layout.message[flat % layout.message.size()];
}

}  // namespace funcmark
