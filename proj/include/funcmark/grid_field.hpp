#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "funcmark/field.hpp"

namespace funcmark {

// Scalar field sampled on a regular lattice, reconstructed with an
// interpolating tricubic B-spline (coefficients from the standard recursive
// prefilter, mirror boundaries). C^2 on the closed bounding box; queries
// outside it raise OutOfDomainError.
class GridField final : public ScalarField {
public:
    // values: nx*ny*nz samples, x index fastest, then y, then z.
    GridField(std::array<uint32_t, 3> dims, const Vec3& bbox_min, const Vec3& bbox_max,
              std::vector<float> values);

    double eval(const Vec3& p) const override;
    Vec3 gradient(const Vec3& p) const override;
    Mat3 hessian(const Vec3& p) const override;

    const std::array<uint32_t, 3>& dims() const { return dims_; }
    const Vec3& bbox_min() const { return bbox_min_; }
    const Vec3& bbox_max() const { return bbox_max_; }
    const std::vector<float>& values() const { return values_; }

    bool contains(const Vec3& p) const;

private:
    // Local lattice coordinate in [0, n-1] per axis; throws when outside.
    Vec3 local(const Vec3& p) const;
    double coeff(int i, int j, int k) const;

    std::array<uint32_t, 3> dims_;
    Vec3 bbox_min_, bbox_max_;
    Vec3 spacing_;
    std::vector<float> values_;
    std::vector<float> coeffs_;
};

// Samples `field` on the lattice and wraps the result. Deterministic.
GridField bake_grid(const ScalarField& field, std::array<uint32_t, 3> dims,
                    const Vec3& bbox_min, const Vec3& bbox_max);

}  // namespace funcmark
