#pragma once

#include <memory>
#include <vector>

#include "funcmark/errors.hpp"
#include "funcmark/linalg.hpp"

namespace funcmark {

// Differentiable scalar field on (a subset of) R^3. Implementations are
// immutable after construction and safe for concurrent evaluation.
class ScalarField {
public:
    virtual ~ScalarField() = default;

    virtual double eval(const Vec3& p) const = 0;
    virtual Vec3 gradient(const Vec3& p) const = 0;
    virtual Mat3 hessian(const Vec3& p) const = 0;
};

// Exact Euclidean signed distance to a sphere. The gradient at the exact
// center is defined as (0,0,1) so the field is total.
class SphereField final : public ScalarField {
public:
    SphereField(const Vec3& center, double radius);

    double eval(const Vec3& p) const override;
    Vec3 gradient(const Vec3& p) const override;
    Mat3 hessian(const Vec3& p) const override;

    const Vec3& center() const { return center_; }
    double radius() const { return radius_; }

private:
    Vec3 center_;
    double radius_;
};

// Exact signed distance to a torus with axis z through its center.
// Gradient limit on the axis circle (rho = 0) points along +x; on the core
// circle it points along +z.
class TorusField final : public ScalarField {
public:
    TorusField(const Vec3& center, double major_radius, double minor_radius);

    double eval(const Vec3& p) const override;
    Vec3 gradient(const Vec3& p) const override;
    Mat3 hessian(const Vec3& p) const override;

    const Vec3& center() const { return center_; }
    double major_radius() const { return major_; }
    double minor_radius() const { return minor_; }

private:
    Vec3 center_;
    double major_;
    double minor_;
};

// Exponential smooth minimum of child fields. C^2 wherever the children are,
// but no longer an exact distance (|grad| <= 1 in the blend region).
class SmoothUnionField final : public ScalarField {
public:
    SmoothUnionField(std::vector<std::shared_ptr<const ScalarField>> children,
                     double blend_radius);

    double eval(const Vec3& p) const override;
    Vec3 gradient(const Vec3& p) const override;
    Mat3 hessian(const Vec3& p) const override;

private:
    // Softmin weights at p; returns per-child values as well.
    void weights(const Vec3& p, std::vector<double>& vals, std::vector<double>& w) const;

    std::vector<std::shared_ptr<const ScalarField>> children_;
    double k_;
};

}  // namespace funcmark
