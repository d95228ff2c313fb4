#include "funcmark/field.hpp"

#include <algorithm>
#include <cmath>

namespace funcmark {

namespace {
constexpr double kTiny = 1e-12;
}

SphereField::SphereField(const Vec3& center, double radius)
    : center_(center), radius_(radius) {
    if (!(radius > 0.0) || !finite(center))
        throw InvalidArgumentError("sphere: radius must be positive and center finite");
}

double SphereField::eval(const Vec3& p) const { return norm(p - center_) - radius_; }

Vec3 SphereField::gradient(const Vec3& p) const {
    Vec3 d = p - center_;
    double n = norm(d);
    if (n < kTiny) return {0.0, 0.0, 1.0};  // limit convention at the center
    return d / n;
}

Mat3 SphereField::hessian(const Vec3& p) const {
    Vec3 d = p - center_;
    double n = norm(d);
    if (n < kTiny) return Mat3::zero();  // no limit exists at the center
    Vec3 u = d / n;
    return (Mat3::identity() - outer(u, u)) * (1.0 / n);
}

TorusField::TorusField(const Vec3& center, double major_radius, double minor_radius)
    : center_(center), major_(major_radius), minor_(minor_radius) {
    if (!(major_radius > 0.0) || !(minor_radius > 0.0) || minor_radius >= major_radius)
        throw InvalidArgumentError("torus: need 0 < minor radius < major radius");
}

double TorusField::eval(const Vec3& p) const {
    Vec3 q = p - center_;
    double rho = std::hypot(q.x, q.y);
    double u = rho - major_;
    return std::hypot(u, q.z) - minor_;
}

Vec3 TorusField::gradient(const Vec3& p) const {
    Vec3 q = p - center_;
    double rho = std::hypot(q.x, q.y);
    double cx, cy;  // unit radial direction in the xy-plane
    if (rho < kTiny) {
        cx = 1.0;
        cy = 0.0;
        rho = 0.0;
    } else {
        cx = q.x / rho;
        cy = q.y / rho;
    }
    double u = rho - major_;
    double d = std::hypot(u, q.z);
    if (d < kTiny) return {0.0, 0.0, 1.0};  // on the core circle
    double a = u / d;
    return {a * cx, a * cy, q.z / d};
}

Mat3 TorusField::hessian(const Vec3& p) const {
    Vec3 q = p - center_;
    double rho = std::hypot(q.x, q.y);
    rho = std::max(rho, kTiny);
    double cx = q.x / rho, cy = q.y / rho;
    double u = rho - major_;
    double d = std::max(std::hypot(u, q.z), kTiny);
    double d3 = d * d * d;
    double z2 = q.z * q.z;
    double a = u / d;

    Mat3 h;
    h(0, 0) = cx * cx * z2 / d3 + a * cy * cy / rho;
    h(1, 1) = cy * cy * z2 / d3 + a * cx * cx / rho;
    h(0, 1) = h(1, 0) = cx * cy * z2 / d3 - a * cx * cy / rho;
    h(0, 2) = h(2, 0) = -cx * u * q.z / d3;
    h(1, 2) = h(2, 1) = -cy * u * q.z / d3;
    h(2, 2) = u * u / d3;
    return h;
}

SmoothUnionField::SmoothUnionField(std::vector<std::shared_ptr<const ScalarField>> children,
                                   double blend_radius)
    : children_(std::move(children)), k_(blend_radius) {
    if (children_.size() < 2)
        throw InvalidArgumentError("smooth union: need at least two children");
    if (!(blend_radius > 0.0))
        throw InvalidArgumentError("smooth union: blend radius must be positive");
}

void SmoothUnionField::weights(const Vec3& p, std::vector<double>& vals,
                               std::vector<double>& w) const {
    vals.resize(children_.size());
    w.resize(children_.size());
    double m = 0.0;
    for (size_t i = 0; i < children_.size(); ++i) {
        vals[i] = children_[i]->eval(p);
        m = i == 0 ? vals[i] : std::min(m, vals[i]);
    }
    double s = 0.0;
    for (size_t i = 0; i < children_.size(); ++i) {
        w[i] = std::exp(-(vals[i] - m) / k_);
        s += w[i];
    }
    for (auto& wi : w) wi /= s;
}

double SmoothUnionField::eval(const Vec3& p) const {
    double m = children_[0]->eval(p);
    for (size_t i = 1; i < children_.size(); ++i) m = std::min(m, children_[i]->eval(p));
    double s = 0.0;
    for (const auto& c : children_) s += std::exp(-(c->eval(p) - m) / k_);
    return m - k_ * std::log(s);
}

Vec3 SmoothUnionField::gradient(const Vec3& p) const {
    std::vector<double> vals, w;
    weights(p, vals, w);
    Vec3 g{0, 0, 0};
    for (size_t i = 0; i < children_.size(); ++i) g += w[i] * children_[i]->gradient(p);
    return g;
}

Mat3 SmoothUnionField::hessian(const Vec3& p) const {
    std::vector<double> vals, w;
    weights(p, vals, w);
    Vec3 g{0, 0, 0};
    std::vector<Vec3> gi(children_.size());
    for (size_t i = 0; i < children_.size(); ++i) {
        gi[i] = children_[i]->gradient(p);
        g += w[i] * gi[i];
    }
    Mat3 h = Mat3::zero();
    for (size_t i = 0; i < children_.size(); ++i) {
        h = h + children_[i]->hessian(p) * w[i];
        h = h - outer(gi[i], gi[i]) * (w[i] / k_);
    }
    h = h + outer(g, g) * (1.0 / k_);
    return h;
}

}  // namespace funcmark
