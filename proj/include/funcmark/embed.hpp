#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "funcmark/field.hpp"
#include "funcmark/grid_field.hpp"
#include "funcmark/partition.hpp"

namespace funcmark {

struct NewtonConfig {
    double tolerance = 1e-8;  // tau; convergence declared on |D(y) - x| <= 10*tau
    int max_iterations = 100;
    int batch_size = 100;  // total start count: the query point plus seeded samples
    uint64_t seed = 0;

    void validate() const;
};

// D(y) = y +/- grad F(y) * C(y), sign by the partition bit. Identity at the
// origin where the direction is undefined.
Vec3 deform(const Vec3& y, const ScalarField& base, const PartitionLayout& layout);

// J_D(y) = I +/- (C(y) H_F(y) + grad C(y) grad F(y)^T). On the z-axis the
// window gradient is singular and is substituted by zero.
Mat3 deform_jacobian(const Vec3& y, const ScalarField& base, const PartitionLayout& layout);

// Newton inversion of the deformation. Starts at x itself, falling back to
// (batch_size - 1) seeded starts in [-1,1]^3; returns the converged candidate
// with the smallest |D(y) - x|. Throws NonConvergenceError when no start
// converges.
Vec3 invert_deform(const Vec3& x, const ScalarField& base, const PartitionLayout& layout,
                   const NewtonConfig& cfg);

// G(x) = F(D^-1(x)): the watermarked field. Gradient is analytic; the Hessian
// falls back to central differences of the gradient.
class WatermarkedField final : public ScalarField {
public:
    WatermarkedField(std::shared_ptr<const ScalarField> base, PartitionLayout layout,
                     NewtonConfig newton = {});

    double eval(const Vec3& x) const override;
    Vec3 gradient(const Vec3& x) const override;
    Mat3 hessian(const Vec3& x) const override;

    const ScalarField& base() const { return *base_; }
    const PartitionLayout& layout() const { return layout_; }
    const NewtonConfig& newton() const { return newton_; }

private:
    std::shared_ptr<const ScalarField> base_;
    PartitionLayout layout_;
    NewtonConfig newton_;
};

struct BakeReport {
    size_t total_nodes = 0;
    size_t newton_failures = 0;  // nodes where the inversion failed and F(x) was used

    double failure_fraction() const {
        return total_nodes ? static_cast<double>(newton_failures) / total_nodes : 0.0;
    }
};

// Bakes the watermarked field to a standalone grid (the shipped asset). Nodes
// where Newton fails fall back to the base field value and are counted.
GridField bake_watermarked(const WatermarkedField& wf, std::array<uint32_t, 3> dims,
                           const Vec3& bbox_min, const Vec3& bbox_max,
                           BakeReport* report = nullptr);

}  // namespace funcmark
