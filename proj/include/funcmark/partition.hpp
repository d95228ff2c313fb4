#pragma once

#include <cstdint>
#include <vector>

#include "funcmark/errors.hpp"
#include "funcmark/linalg.hpp"

namespace funcmark {

struct SphericalCoord {
    double r = 0.0;      // radius >= 0
    double theta = 0.0;  // inclination from +z, in [0, pi]
    double phi = 0.0;    // azimuth via atan2, in [-pi, pi]
};

// r = 0 maps to theta = 0, phi = 0 so the conversion is total.
SphericalCoord cart_to_sph(const Vec3& p);
Vec3 sph_to_cart(const SphericalCoord& s);

struct PartitionIndex {
    int i = 0;  // theta row
    int j = 0;  // phi column
    bool operator==(const PartitionIndex&) const = default;
};

// The n_s x n_s angular grid plus the message assignment and strength delta.
// Cells are half-open with the lower index winning on boundaries; the last
// cell in each direction is closed.
struct PartitionLayout {
    int n_s = 32;
    std::vector<uint8_t> message;  // N_m bits
    double delta = 0.001;

    PartitionLayout() = default;
    PartitionLayout(int n_s_, std::vector<uint8_t> message_, double delta_);

    bool operator==(const PartitionLayout&) const = default;

    int flat_index(PartitionIndex idx) const { return idx.i * n_s + idx.j; }
    int partition_count() const { return n_s * n_s; }
};

PartitionIndex partition_of(const Vec3& p, const PartitionLayout& layout);

// Biquadratic bump: delta at the cell center, zero on cell boundaries.
// Depends only on the direction of p.
double window(const Vec3& p, const PartitionLayout& layout);

// Cartesian gradient of the window. Throws SingularDirectionError on the
// z-axis where the azimuth gradient is undefined.
Vec3 window_gradient(const Vec3& p, const PartitionLayout& layout);

uint8_t bit_of_partition(PartitionIndex idx, const PartitionLayout& layout);

}  // namespace funcmark
