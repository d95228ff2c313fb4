#include "funcmark/surface.hpp"

#include <cmath>
#include <unordered_map>

#include "funcmark/mc_tables.hpp"
#include "funcmark/parallel.hpp"
#include "funcmark/rng.hpp"

namespace funcmark {

namespace {

constexpr int kMaxDescentIterations = 50;

// Lattice of field values, node index (x fastest) -> value.
struct Lattice {
    uint32_t n;  // nodes per axis
    Vec3 lo, hi, h;
    std::vector<double> values;

    Vec3 node(uint32_t x, uint32_t y, uint32_t z) const {
        return {lo.x + x * h.x, lo.y + y * h.y, lo.z + z * h.z};
    }
    double value(uint32_t x, uint32_t y, uint32_t z) const {
        return values[(size_t(z) * n + y) * n + x];
    }
    size_t edge_key(uint32_t x, uint32_t y, uint32_t z, int axis) const {
        return ((size_t(z) * n + y) * n + x) * 3 + axis;
    }
};

Lattice sample_lattice(const ScalarField& field, uint32_t resolution, const Vec3& bbox_min,
                       const Vec3& bbox_max) {
    if (resolution < 8) throw InvalidArgumentError("isosurface: resolution must be >= 8");
    for (int a = 0; a < 3; ++a)
        if (!(bbox_min[a] < bbox_max[a]))
            throw InvalidArgumentError("isosurface: degenerate bounding box");
    Lattice lat;
    lat.n = resolution;
    lat.lo = bbox_min;
    lat.hi = bbox_max;
    for (int a = 0; a < 3; ++a) lat.h[a] = (bbox_max[a] - bbox_min[a]) / (resolution - 1);
    lat.values.resize(size_t(lat.n) * lat.n * lat.n);
    parallel_for(0, lat.n, [&](size_t z) {
        for (uint32_t y = 0; y < lat.n; ++y)
            for (uint32_t x = 0; x < lat.n; ++x)
                lat.values[(z * lat.n + y) * lat.n + x] =
                    field.eval(lat.node(x, y, static_cast<uint32_t>(z)));
    });
    return lat;
}

inline bool inside(double v) { return v < 0.0; }

}  // namespace

SampleSet sample_surface(const ScalarField& field, size_t n, uint64_t seed, double tol) {
    if (!(tol > 0.0)) throw InvalidArgumentError("sample_surface: tolerance must be positive");
    SampleSet out;
    out.points.reserve(n);
    if (n == 0) return out;

    Rng rng(seed);
    const size_t max_attempts = 1000 * n + 1000;
    size_t attempts = 0;
    while (out.points.size() < n) {
        if (++attempts > max_attempts)
            throw SamplingExhaustedError("sample_surface: attempt budget exhausted");
        Vec3 p = rng.uniform_in_cube(1.0);
        bool ok = false;
        try {
            for (int it = 0; it < kMaxDescentIterations; ++it) {
                double f = field.eval(p);
                if (std::fabs(f) <= tol) {
                    ok = true;
                    break;
                }
                p -= field.gradient(p) * f;
                if (!finite(p)) break;
            }
            if (ok && std::fabs(field.eval(p)) > tol) ok = false;
        } catch (const OutOfDomainError&) {
            ok = false;  // descent left a grid field's box: just a failed start
        }
        if (ok) out.points.push_back(p);
    }
    return out;
}

TriangleMesh marching_cubes(const ScalarField& field, uint32_t resolution, const Vec3& bbox_min,
                            const Vec3& bbox_max) {
    using namespace detail;
    Lattice lat = sample_lattice(field, resolution, bbox_min, bbox_max);

    TriangleMesh mesh;
    std::unordered_map<size_t, uint32_t> edge_vertex;  // lattice edge -> mesh vertex
    const uint32_t cells = lat.n - 1;

    auto vertex_on_edge = [&](uint32_t x, uint32_t y, uint32_t z, int corner_a,
                              int corner_b) -> uint32_t {
        uint32_t ax = x + kCornerOffset[corner_a][0];
        uint32_t ay = y + kCornerOffset[corner_a][1];
        uint32_t az = z + kCornerOffset[corner_a][2];
        uint32_t bx = x + kCornerOffset[corner_b][0];
        uint32_t by = y + kCornerOffset[corner_b][1];
        uint32_t bz = z + kCornerOffset[corner_b][2];
        // Canonical edge key: lower lattice corner + axis.
        int axis = bx != ax ? 0 : (by != ay ? 1 : 2);
        uint32_t kx = std::min(ax, bx), ky = std::min(ay, by), kz = std::min(az, bz);
        size_t key = lat.edge_key(kx, ky, kz, axis);
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;

        double va = lat.value(ax, ay, az);
        double vb = lat.value(bx, by, bz);
        double t = va / (va - vb);  // sign change guarantees va != vb
        Vec3 pa = lat.node(ax, ay, az);
        Vec3 pb = lat.node(bx, by, bz);
        Vec3 p = pa + (pb - pa) * t;
        uint32_t idx = static_cast<uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(p);
        edge_vertex.emplace(key, idx);
        return idx;
    };

    for (uint32_t z = 0; z < cells; ++z)
        for (uint32_t y = 0; y < cells; ++y)
            for (uint32_t x = 0; x < cells; ++x) {
                int cube = 0;
                double vals[8];
                for (int c = 0; c < 8; ++c) {
                    vals[c] = lat.value(x + kCornerOffset[c][0], y + kCornerOffset[c][1],
                                        z + kCornerOffset[c][2]);
                    if (inside(vals[c])) cube |= 1 << c;
                }
                if (kEdgeTable[cube] == 0) continue;
                uint32_t ev[12];
                for (int e = 0; e < 12; ++e)
                    if (kEdgeTable[cube] & (1 << e))
                        ev[e] = vertex_on_edge(x, y, z, kEdgeCorners[e][0], kEdgeCorners[e][1]);
                for (int t = 0; kTriTable[cube][t] != -1; t += 3) {
                    uint32_t a = ev[kTriTable[cube][t]];
                    uint32_t b = ev[kTriTable[cube][t + 1]];
                    uint32_t c = ev[kTriTable[cube][t + 2]];
                    if (a == b || b == c || a == c) continue;  // collapsed on a lattice node
                    mesh.faces.push_back({a, b, c});
                }
            }

    if (mesh.vertices.empty())
        throw EmptySurfaceError("marching_cubes: field has no zero crossing in the box");

    mesh.normals.resize(mesh.vertices.size());
    parallel_for(0, mesh.vertices.size(), [&](size_t i) {
        mesh.normals[i] = normalized(field.gradient(mesh.vertices[i]));
    });

    // The table winding already matches our sign convention (negative inside):
    // face normals agree with the field gradient (outward).
    return mesh;
}

TriangleMesh dual_contouring(const ScalarField& field, uint32_t resolution, const Vec3& bbox_min,
                             const Vec3& bbox_max) {
    using namespace detail;
    Lattice lat = sample_lattice(field, resolution, bbox_min, bbox_max);
    const uint32_t cells = lat.n - 1;

    TriangleMesh mesh;
    std::unordered_map<size_t, uint32_t> cell_vertex;  // flat cell index -> mesh vertex
    auto cell_key = [&](uint32_t x, uint32_t y, uint32_t z) {
        return (size_t(z) * cells + y) * cells + x;
    };

    // Pass 1: one vertex per cell containing a sign change.
    for (uint32_t z = 0; z < cells; ++z)
        for (uint32_t y = 0; y < cells; ++y)
            for (uint32_t x = 0; x < cells; ++x) {
                double vals[8];
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    vals[c] = lat.value(x + kCornerOffset[c][0], y + kCornerOffset[c][1],
                                        z + kCornerOffset[c][2]);
                    if (inside(vals[c])) cube |= 1 << c;
                }
                if (cube == 0 || cube == 255) continue;

                // Hermite data from the crossed edges.
                Vec3 centroid{0, 0, 0};
                Mat3 ata = Mat3::zero();
                Vec3 atb{0, 0, 0};
                int crossings = 0;
                for (int e = 0; e < 12; ++e) {
                    int ca = kEdgeCorners[e][0], cb = kEdgeCorners[e][1];
                    if (inside(vals[ca]) == inside(vals[cb])) continue;
                    Vec3 pa = lat.node(x + kCornerOffset[ca][0], y + kCornerOffset[ca][1],
                                       z + kCornerOffset[ca][2]);
                    Vec3 pb = lat.node(x + kCornerOffset[cb][0], y + kCornerOffset[cb][1],
                                       z + kCornerOffset[cb][2]);
                    double t = vals[ca] / (vals[ca] - vals[cb]);
                    Vec3 p = pa + (pb - pa) * t;
                    Vec3 nrm = normalized(field.gradient(p));
                    centroid += p;
                    ata = ata + outer(nrm, nrm);
                    atb += nrm * dot(nrm, p);
                    ++crossings;
                }
                centroid = centroid / crossings;

                // Regularized normal equations pulled toward the centroid.
                const double reg = 1e-3;
                Mat3 a = ata + Mat3::identity() * reg;
                Vec3 b = atb + centroid * reg;
                Vec3 v = inverse(a) * b;
                // Clamp into the cell to keep the mesh locally sane.
                Vec3 clo = lat.node(x, y, z), chi = lat.node(x + 1, y + 1, z + 1);
                for (int axis = 0; axis < 3; ++axis)
                    v[axis] = std::clamp(v[axis], clo[axis], chi[axis]);

                uint32_t idx = static_cast<uint32_t>(mesh.vertices.size());
                mesh.vertices.push_back(v);
                cell_vertex.emplace(cell_key(x, y, z), idx);
            }

    if (mesh.vertices.empty())
        throw EmptySurfaceError("dual_contouring: field has no zero crossing in the box");

    // Pass 2: a quad around every interior lattice edge with a sign change.
    // Quad cells are listed counter-clockwise when viewed along +axis.
    auto emit_quad = [&](uint32_t c0x, uint32_t c0y, uint32_t c0z, uint32_t c1x, uint32_t c1y,
                         uint32_t c1z, uint32_t c2x, uint32_t c2y, uint32_t c2z, uint32_t c3x,
                         uint32_t c3y, uint32_t c3z, bool flip) {
        uint32_t q[4] = {cell_vertex.at(cell_key(c0x, c0y, c0z)),
                         cell_vertex.at(cell_key(c1x, c1y, c1z)),
                         cell_vertex.at(cell_key(c2x, c2y, c2z)),
                         cell_vertex.at(cell_key(c3x, c3y, c3z))};
        if (flip) std::swap(q[1], q[3]);
        if (q[0] != q[1] && q[1] != q[2] && q[0] != q[2]) mesh.faces.push_back({q[0], q[1], q[2]});
        if (q[0] != q[2] && q[2] != q[3] && q[0] != q[3]) mesh.faces.push_back({q[0], q[2], q[3]});
    };

    for (uint32_t z = 1; z < cells; ++z)
        for (uint32_t y = 1; y < cells; ++y)
            for (uint32_t x = 1; x < cells; ++x) {
                double v0 = lat.value(x, y, z);
                // x-edge (x,y,z)-(x+1,y,z)
                if (x < cells) {
                    double v1 = lat.value(x + 1, y, z);
                    if (inside(v0) != inside(v1))
                        emit_quad(x, y - 1, z - 1, x, y, z - 1, x, y, z, x, y - 1, z,
                                  inside(v1));
                }
                // y-edge
                if (y < cells) {
                    double v1 = lat.value(x, y + 1, z);
                    if (inside(v0) != inside(v1))
                        emit_quad(x - 1, y, z - 1, x - 1, y, z, x, y, z, x, y, z - 1,
                                  inside(v1));
                }
                // z-edge
                if (z < cells) {
                    double v1 = lat.value(x, y, z + 1);
                    if (inside(v0) != inside(v1))
                        emit_quad(x - 1, y - 1, z, x, y - 1, z, x, y, z, x - 1, y, z,
                                  inside(v1));
                }
            }

    mesh.normals.resize(mesh.vertices.size());
    parallel_for(0, mesh.vertices.size(), [&](size_t i) {
        mesh.normals[i] = normalized(field.gradient(mesh.vertices[i]));
    });
    return mesh;
}

}  // namespace funcmark
