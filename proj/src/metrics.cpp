#include "funcmark/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "funcmark/parallel.hpp"
#include "funcmark/rng.hpp"

namespace funcmark {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    Vec3 bp = p - b;
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    Vec3 cp = p - c;
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

namespace {

inline double box_distance2(const Vec3& p, const Vec3& lo, const Vec3& hi) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        double d = std::max({lo[a] - p[a], 0.0, p[a] - hi[a]});
        d2 += d * d;
    }
    return d2;
}

}  // namespace

SurfaceQueryIndex::SurfaceQueryIndex(const TriangleMesh& mesh) : mesh_(mesh) {
    if (mesh_.faces.empty()) throw InvalidMeshError("surface index: mesh has no faces");
    tri_order_.resize(mesh_.faces.size());
    std::iota(tri_order_.begin(), tri_order_.end(), 0u);
    nodes_.reserve(2 * mesh_.faces.size());
    build(0, static_cast<uint32_t>(tri_order_.size()));
}

int32_t SurfaceQueryIndex::build(uint32_t begin, uint32_t end) {
    Node node;
    double inf = std::numeric_limits<double>::infinity();
    node.lo = {inf, inf, inf};
    node.hi = {-inf, -inf, -inf};
    for (uint32_t i = begin; i < end; ++i)
        for (uint32_t idx : mesh_.faces[tri_order_[i]]) {
            const Vec3& v = mesh_.vertices[idx];
            for (int a = 0; a < 3; ++a) {
                node.lo[a] = std::min(node.lo[a], v[a]);
                node.hi[a] = std::max(node.hi[a], v[a]);
            }
        }

    int32_t id = static_cast<int32_t>(nodes_.size());
    nodes_.push_back(node);

    const uint32_t leaf_size = 8;
    if (end - begin > leaf_size) {
        int axis = 0;
        Vec3 extent = node.hi - node.lo;
        if (extent.y > extent[axis]) axis = 1;
        if (extent.z > extent[axis]) axis = 2;
        auto centroid = [&](uint32_t f) {
            const auto& t = mesh_.faces[f];
            return (mesh_.vertices[t[0]][axis] + mesh_.vertices[t[1]][axis] +
                    mesh_.vertices[t[2]][axis]) / 3.0;
        };
        uint32_t mid = (begin + end) / 2;
        std::nth_element(tri_order_.begin() + begin, tri_order_.begin() + mid,
                         tri_order_.begin() + end,
                         [&](uint32_t x, uint32_t y) { return centroid(x) < centroid(y); });
        if (mid > begin && mid < end) {
            int32_t l = build(begin, mid);
            int32_t r = build(mid, end);
            nodes_[id].left = l;
            nodes_[id].right = r;
            return id;
        }
    }
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
}

void SurfaceQueryIndex::query(int32_t ni, const Vec3& p, Result& best) const {
    const Node& node = nodes_[ni];
    if (box_distance2(p, node.lo, node.hi) >= best.distance * best.distance) return;
    if (node.left < 0) {
        for (uint32_t i = node.begin; i < node.end; ++i) {
            uint32_t f = tri_order_[i];
            const auto& t = mesh_.faces[f];
            Vec3 q = closest_point_on_triangle(p, mesh_.vertices[t[0]], mesh_.vertices[t[1]],
                                               mesh_.vertices[t[2]]);
            double d = norm(q - p);
            if (d < best.distance) {
                best.distance = d;
                best.point = q;
                best.face = f;
            }
        }
        return;
    }
    // Visit the nearer child first.
    double dl = box_distance2(p, nodes_[node.left].lo, nodes_[node.left].hi);
    double dr = box_distance2(p, nodes_[node.right].lo, nodes_[node.right].hi);
    if (dl <= dr) {
        query(node.left, p, best);
        query(node.right, p, best);
    } else {
        query(node.right, p, best);
        query(node.left, p, best);
    }
}

SurfaceQueryIndex::Result SurfaceQueryIndex::nearest(const Vec3& p) const {
    Result best;
    best.distance = std::numeric_limits<double>::infinity();
    query(0, p, best);
    return best;
}

std::vector<MeshSample> sample_mesh_surface(const TriangleMesh& mesh, size_t n, uint64_t seed) {
    if (mesh.faces.empty()) throw InvalidMeshError("sample_mesh_surface: mesh has no faces");
    std::vector<double> cum(mesh.faces.size());
    double total = 0.0;
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        total += mesh.face_area(f);
        cum[f] = total;
    }
    if (!(total > 0.0)) throw InvalidMeshError("sample_mesh_surface: zero total area");

    Rng rng(seed);
    std::vector<MeshSample> samples(n);
    for (size_t i = 0; i < n; ++i) {
        double pick = rng.uniform() * total;
        size_t f = std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
        f = std::min(f, mesh.faces.size() - 1);
        const auto& t = mesh.faces[f];
        // Uniform barycentric point via the square-root trick.
        double r1 = std::sqrt(rng.uniform());
        double r2 = rng.uniform();
        double u = 1.0 - r1, v = r1 * (1.0 - r2), w = r1 * r2;
        samples[i].point =
            mesh.vertices[t[0]] * u + mesh.vertices[t[1]] * v + mesh.vertices[t[2]] * w;
        if (mesh.has_normals()) {
            samples[i].normal = normalized(mesh.normals[t[0]] * u + mesh.normals[t[1]] * v +
                                           mesh.normals[t[2]] * w);
        } else {
            samples[i].normal = mesh.face_normal(f);
        }
    }
    return samples;
}

namespace {

// Compact kd-tree over points for chamfer's point-to-point queries.
class PointTree {
public:
    explicit PointTree(const std::vector<Vec3>& pts) : pts_(pts) {
        order_.resize(pts.size());
        std::iota(order_.begin(), order_.end(), size_t{0});
        build(0, pts.size(), 0);
    }

    double nearest_distance(const Vec3& p) const {
        double best = std::numeric_limits<double>::infinity();
        search(0, pts_.size(), 0, p, best);
        return std::sqrt(best);
    }

private:
    void build(size_t begin, size_t end, int axis) {
        if (end - begin <= 1) return;
        size_t mid = (begin + end) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](size_t a, size_t b) { return pts_[a][axis] < pts_[b][axis]; });
        build(begin, mid, (axis + 1) % 3);
        build(mid + 1, end, (axis + 1) % 3);
    }

    void search(size_t begin, size_t end, int axis, const Vec3& p, double& best) const {
        if (begin >= end) return;
        size_t mid = (begin + end) / 2;
        const Vec3& q = pts_[order_[mid]];
        best = std::min(best, norm2(q - p));
        double split = q[axis] - p[axis];
        int next = (axis + 1) % 3;
        if (split >= 0.0) {
            search(begin, mid, next, p, best);
            if (split * split < best) search(mid + 1, end, next, p, best);
        } else {
            search(mid + 1, end, next, p, best);
            if (split * split < best) search(begin, mid, next, p, best);
        }
    }

    const std::vector<Vec3>& pts_;
    std::vector<size_t> order_;
};

double mean_nn(const std::vector<Vec3>& from, const PointTree& to) {
    std::vector<double> d(from.size());
    parallel_for(0, from.size(), [&](size_t i) { d[i] = to.nearest_distance(from[i]); });
    double sum = 0.0;
    for (double v : d) sum += v;
    return from.empty() ? 0.0 : sum / from.size();
}

}  // namespace

double chamfer(const TriangleMesh& a, const TriangleMesh& b, size_t n_samples, uint64_t seed) {
    auto sa = sample_mesh_surface(a, n_samples, seed);
    auto sb = sample_mesh_surface(b, n_samples, seed);
    std::vector<Vec3> pa(n_samples), pb(n_samples);
    for (size_t i = 0; i < n_samples; ++i) {
        pa[i] = sa[i].point;
        pb[i] = sb[i].point;
    }
    PointTree ta(pa), tb(pb);
    return 0.5 * (mean_nn(pa, tb) + mean_nn(pb, ta));
}

double p2s(const std::vector<Vec3>& points, const TriangleMesh& reference) {
    if (points.empty()) return 0.0;
    SurfaceQueryIndex index(reference);
    std::vector<double> d(points.size());
    parallel_for(0, points.size(), [&](size_t i) { d[i] = index.nearest(points[i]).distance; });
    double sum = 0.0;
    for (double v : d) sum += v;
    return sum / points.size();
}

namespace {

Vec3 normal_at(const TriangleMesh& mesh, const SurfaceQueryIndex::Result& hit) {
    const auto& t = mesh.faces[hit.face];
    if (!mesh.has_normals()) return mesh.face_normal(hit.face);
    // Barycentric weights of the hit point in its triangle.
    const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
    Vec3 v0 = b - a, v1 = c - a, v2 = hit.point - a;
    double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
    double d20 = dot(v2, v0), d21 = dot(v2, v1);
    double denom = d00 * d11 - d01 * d01;
    if (std::fabs(denom) < 1e-30) return mesh.face_normal(hit.face);
    double v = (d11 * d20 - d01 * d21) / denom;
    double w = (d00 * d21 - d01 * d20) / denom;
    double u = 1.0 - v - w;
    return normalized(mesh.normals[t[0]] * u + mesh.normals[t[1]] * v + mesh.normals[t[2]] * w);
}

double directed_normal_diff(const TriangleMesh& from, const TriangleMesh& to, size_t n,
                            uint64_t seed) {
    auto samples = sample_mesh_surface(from, n, seed);
    SurfaceQueryIndex index(to);
    std::vector<double> d(samples.size());
    parallel_for(0, samples.size(), [&](size_t i) {
        auto hit = index.nearest(samples[i].point);
        d[i] = 1.0 - dot(samples[i].normal, normal_at(to, hit));
    });
    double sum = 0.0;
    for (double v : d) sum += v;
    return samples.empty() ? 0.0 : sum / samples.size();
}

}  // namespace

double normal_difference(const TriangleMesh& a, const TriangleMesh& b, size_t n_samples,
                         uint64_t seed) {
    return 0.5 * (directed_normal_diff(a, b, n_samples, seed) +
                  directed_normal_diff(b, a, n_samples, seed));
}

}  // namespace funcmark
