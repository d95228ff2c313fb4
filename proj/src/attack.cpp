#include "funcmark/attack.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "funcmark/metrics.hpp"
#include "funcmark/rng.hpp"

namespace funcmark {

TriangleMesh gaussian_noise(const TriangleMesh& mesh, double sigma, uint64_t seed) {
    if (sigma < 0.0) throw InvalidArgumentError("gaussian_noise: sigma must be >= 0");
    TriangleMesh out = mesh;
    if (sigma == 0.0) return out;
    Rng rng(seed);
    for (auto& v : out.vertices) {
        v.x += sigma * rng.normal();
        v.y += sigma * rng.normal();
        v.z += sigma * rng.normal();
    }
    return out;
}

TriangleMesh affine(const TriangleMesh& mesh, const SimilarityTransform& t) {
    TriangleMesh out = mesh;
    Mat3 rot = t.rotation();
    for (auto& v : out.vertices) v = t.scale * (rot * v) + t.translation;
    for (auto& n : out.normals) n = normalized(rot * n);
    return out;
}

TriangleMesh quantize(const TriangleMesh& mesh, int bits) {
    if (bits < 1 || bits > 32) throw InvalidArgumentError("quantize: bits must be in [1,32]");
    TriangleMesh out = mesh;
    if (out.vertices.empty()) return out;
    Vec3 lo, hi;
    mesh.bbox(lo, hi);
    double levels = std::ldexp(1.0, bits) - 1.0;  // 2^bits levels
    for (auto& v : out.vertices)
        for (int a = 0; a < 3; ++a) {
            double span = hi[a] - lo[a];
            if (span <= 0.0) continue;
            double q = std::round((v[a] - lo[a]) / span * levels);
            v[a] = lo[a] + q / levels * span;
        }
    return out;
}

TriangleMesh smooth(const TriangleMesh& mesh, int iterations, double lambda) {
    if (iterations < 0) throw InvalidArgumentError("smooth: iterations must be >= 0");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw InvalidArgumentError("smooth: lambda must be in (0,1]");
    TriangleMesh out = mesh;
    if (iterations == 0) return out;

    std::vector<std::set<uint32_t>> neighbors(mesh.vertices.size());
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) {
            neighbors[f[e]].insert(f[(e + 1) % 3]);
            neighbors[f[(e + 1) % 3]].insert(f[e]);
        }

    std::vector<Vec3> next(out.vertices.size());
    for (int it = 0; it < iterations; ++it) {
        for (size_t i = 0; i < out.vertices.size(); ++i) {
            if (neighbors[i].empty()) {
                next[i] = out.vertices[i];
                continue;
            }
            Vec3 c{0, 0, 0};
            for (uint32_t n : neighbors[i]) c += out.vertices[n];
            c = c * (1.0 / neighbors[i].size());
            next[i] = out.vertices[i] + lambda * (c - out.vertices[i]);
        }
        out.vertices.swap(next);
    }
    if (!out.normals.empty()) compute_vertex_normals(out);
    return out;
}

double mean_edge_length(const TriangleMesh& mesh) {
    std::set<std::pair<uint32_t, uint32_t>> edges;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) {
            uint32_t a = f[e], b = f[(e + 1) % 3];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    if (edges.empty()) return 0.0;
    double total = 0.0;
    for (auto [a, b] : edges) total += norm(mesh.vertices[a] - mesh.vertices[b]);
    return total / edges.size();
}

// ---------------------------------------------------------------------------
// Editable mesh shared by simplification and remeshing.
namespace {

struct EditMesh {
    std::vector<Vec3> vertices;
    std::vector<uint8_t> v_alive;
    std::vector<std::array<uint32_t, 3>> faces;
    std::vector<uint8_t> f_alive;
    std::vector<std::vector<uint32_t>> v_faces;  // incident alive faces (may hold stale ids)

    explicit EditMesh(const TriangleMesh& mesh)
        : vertices(mesh.vertices),
          v_alive(mesh.vertices.size(), 1),
          faces(mesh.faces),
          f_alive(mesh.faces.size(), 1),
          v_faces(mesh.vertices.size()) {
        for (uint32_t f = 0; f < faces.size(); ++f)
            for (uint32_t v : faces[f]) v_faces[v].push_back(f);
    }

    void prune(uint32_t v) {
        auto& list = v_faces[v];
        list.erase(std::remove_if(list.begin(), list.end(),
                                  [&](uint32_t f) {
                                      return !f_alive[f] || (faces[f][0] != v &&
                                                             faces[f][1] != v &&
                                                             faces[f][2] != v);
                                  }),
                   list.end());
    }

    std::vector<uint32_t> ring(uint32_t v) {
        prune(v);
        std::vector<uint32_t> out;
        for (uint32_t f : v_faces[v])
            for (uint32_t w : faces[f])
                if (w != v && std::find(out.begin(), out.end(), w) == out.end())
                    out.push_back(w);
        return out;
    }

    bool has_edge(uint32_t a, uint32_t b) {
        prune(a);
        for (uint32_t f : v_faces[a]) {
            const auto& t = faces[f];
            if ((t[0] == b || t[1] == b || t[2] == b)) return true;
        }
        return false;
    }

    // Link condition for collapsing (u, v): the shared one-ring vertices must
    // be exactly the two edge-opposite vertices.
    bool collapse_ok(uint32_t u, uint32_t v) {
        auto ru = ring(u), rv = ring(v);
        std::sort(ru.begin(), ru.end());
        std::sort(rv.begin(), rv.end());
        std::vector<uint32_t> shared;
        std::set_intersection(ru.begin(), ru.end(), rv.begin(), rv.end(),
                              std::back_inserter(shared));
        size_t opposite = 0;
        for (uint32_t f : v_faces[u]) {
            const auto& t = faces[f];
            if (t[0] == v || t[1] == v || t[2] == v) ++opposite;
        }
        if (opposite == 0 || opposite > 2) return false;
        return shared.size() == opposite;
    }

    // Would moving `moved` to `pos` flip any of its surviving faces?
    bool would_flip(uint32_t moved, uint32_t removed, const Vec3& pos) {
        prune(moved);
        for (uint32_t f : v_faces[moved]) {
            const auto& t = faces[f];
            if (t[0] == removed || t[1] == removed || t[2] == removed) continue;
            Vec3 p[3], q[3];
            for (int k = 0; k < 3; ++k) {
                p[k] = vertices[t[k]];
                q[k] = t[k] == moved ? pos : vertices[t[k]];
            }
            Vec3 n0 = cross(p[1] - p[0], p[2] - p[0]);
            Vec3 n1 = cross(q[1] - q[0], q[2] - q[0]);
            if (dot(n0, n1) <= 0.0) return true;
        }
        return false;
    }

    // Collapse u into v, moving v to pos. Caller checks collapse_ok first.
    void collapse(uint32_t u, uint32_t v, const Vec3& pos) {
        prune(u);
        for (uint32_t f : v_faces[u]) {
            auto& t = faces[f];
            if (t[0] == v || t[1] == v || t[2] == v) {
                f_alive[f] = 0;
                continue;
            }
            for (int k = 0; k < 3; ++k)
                if (t[k] == u) t[k] = v;
            v_faces[v].push_back(f);
        }
        v_alive[u] = 0;
        v_faces[u].clear();
        vertices[v] = pos;
        prune(v);
    }

    // Split edge (u, v) at pos; returns the new vertex.
    uint32_t split(uint32_t u, uint32_t v, const Vec3& pos) {
        uint32_t m = static_cast<uint32_t>(vertices.size());
        vertices.push_back(pos);
        v_alive.push_back(1);
        v_faces.emplace_back();
        prune(u);
        std::vector<uint32_t> incident;
        for (uint32_t f : v_faces[u]) {
            const auto& t = faces[f];
            if (t[0] == v || t[1] == v || t[2] == v) incident.push_back(f);
        }
        for (uint32_t f : incident) {
            auto t = faces[f];
            f_alive[f] = 0;
            // Rotate so t = (u, v, w) preserving orientation.
            while (t[0] != u && t[1] != u) std::rotate(t.begin(), t.begin() + 1, t.end());
            if (t[0] != u) std::rotate(t.begin(), t.begin() + 1, t.end());
            if (t[1] != v) {  // edge appears as (w, u) order; rotate to (u, ?, v)
                // t = (u, w, v): split into (u, w, m) and (m, w, v)
                add_face({t[0], t[1], m});
                add_face({m, t[1], t[2]});
            } else {
                // t = (u, v, w): split into (u, m, w) and (m, v, w)
                add_face({t[0], m, t[2]});
                add_face({m, t[1], t[2]});
            }
        }
        prune(u);
        prune(v);
        return m;
    }

    // Flip the interior edge (u, v) shared by exactly two faces.
    bool flip(uint32_t u, uint32_t v) {
        prune(u);
        std::vector<uint32_t> incident;
        for (uint32_t f : v_faces[u]) {
            const auto& t = faces[f];
            if (t[0] == v || t[1] == v || t[2] == v) incident.push_back(f);
        }
        if (incident.size() != 2) return false;
        auto third = [&](uint32_t f) {
            for (uint32_t w : faces[f])
                if (w != u && w != v) return w;
            return u;
        };
        uint32_t a = third(incident[0]), b = third(incident[1]);
        if (a == b || has_edge(a, b)) return false;
        // Reject flips that would create degenerate or folded triangles.
        for (auto tri : {std::array<Vec3, 3>{vertices[u], vertices[b], vertices[a]},
                         std::array<Vec3, 3>{vertices[v], vertices[a], vertices[b]}}) {
            Vec3 n = cross(tri[1] - tri[0], tri[2] - tri[0]);
            if (norm(n) < 1e-14) return false;
        }
        // Preserve orientation: face containing directed edge u->v becomes
        // (u, b_or_a, ...) consistently.
        auto directed = [&](uint32_t f, uint32_t s, uint32_t t) {
            const auto& tri = faces[f];
            for (int k = 0; k < 3; ++k)
                if (tri[k] == s && tri[(k + 1) % 3] == t) return true;
            return false;
        };
        uint32_t f_uv = directed(incident[0], u, v) ? incident[0] : incident[1];
        uint32_t f_vu = f_uv == incident[0] ? incident[1] : incident[0];
        uint32_t a_uv = third(f_uv), a_vu = third(f_vu);
        f_alive[f_uv] = 0;
        f_alive[f_vu] = 0;
        add_face({u, a_vu, a_uv});
        add_face({v, a_uv, a_vu});
        return true;
    }

    size_t valence(uint32_t v) { return ring(v).size(); }

    TriangleMesh to_mesh() const {
        TriangleMesh out;
        std::vector<uint32_t> remap(vertices.size(), UINT32_MAX);
        for (uint32_t v = 0; v < vertices.size(); ++v)
            if (v_alive[v]) {
                remap[v] = static_cast<uint32_t>(out.vertices.size());
                out.vertices.push_back(vertices[v]);
            }
        for (uint32_t f = 0; f < faces.size(); ++f) {
            if (!f_alive[f]) continue;
            const auto& t = faces[f];
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
            out.faces.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
        }
        return out;
    }

private:
    void add_face(std::array<uint32_t, 3> t) {
        uint32_t f = static_cast<uint32_t>(faces.size());
        faces.push_back(t);
        f_alive.push_back(1);
        for (uint32_t v : t) v_faces[v].push_back(f);
    }
};

// ---------------------------------------------------------------------------
// Quadric error metric simplification.

struct Quadric {
    // Symmetric 4x4: indices a11 a12 a13 a14 a22 a23 a24 a33 a34 a44.
    std::array<double, 10> q{};

    void add_plane(const Vec3& n, double d) {
        const double v[4] = {n.x, n.y, n.z, d};
        int idx = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) q[idx++] += v[i] * v[j];
    }

    Quadric& operator+=(const Quadric& o) {
        for (int i = 0; i < 10; ++i) q[i] += o.q[i];
        return *this;
    }

    double cost(const Vec3& p) const {
        const double v[4] = {p.x, p.y, p.z, 1.0};
        double c = 0.0;
        int idx = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                double w = (i == j) ? 1.0 : 2.0;
                c += w * q[idx++] * v[i] * v[j];
            }
        return c;
    }

    bool optimal(Vec3& out) const {
        Mat3 A{{q[0], q[1], q[2], q[1], q[4], q[5], q[2], q[5], q[7]}};
        if (std::fabs(A.det()) < 1e-12) return false;
        Vec3 b{-q[3], -q[6], -q[8]};
        out = inverse(A) * b;
        return finite(out);
    }
};

}  // namespace

TriangleMesh simplify(const TriangleMesh& mesh, double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw InvalidArgumentError("simplify: fraction must be in [0,1)");
    TriangleMesh copy = mesh;
    if (fraction == 0.0) return copy;
    mesh.validate();

    EditMesh em(mesh);
    std::vector<Quadric> quadrics(mesh.vertices.size());
    for (const auto& f : mesh.faces) {
        Vec3 n = cross(mesh.vertices[f[1]] - mesh.vertices[f[0]],
                       mesh.vertices[f[2]] - mesh.vertices[f[0]]);
        double len = norm(n);
        if (len < 1e-14) continue;
        n = n * (1.0 / len);
        double d = -dot(n, mesh.vertices[f[0]]);
        for (uint32_t v : f) quadrics[v].add_plane(n, d);
    }

    struct Candidate {
        double cost;
        uint32_t u, v;
        uint64_t stamp;  // sum of endpoint versions at push time
        bool operator>(const Candidate& o) const { return cost > o.cost; }
    };
    std::vector<uint64_t> version(mesh.vertices.size(), 0);
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<Candidate>> heap;

    auto best_target = [&](uint32_t u, uint32_t v, double& cost) {
        Quadric q = quadrics[u];
        q += quadrics[v];
        Vec3 best = 0.5 * (em.vertices[u] + em.vertices[v]);
        Vec3 opt;
        if (q.optimal(opt) && norm(opt - best) < 1.0) best = opt;
        double c = q.cost(best);
        for (const Vec3& alt : {em.vertices[u], em.vertices[v]}) {
            double ca = q.cost(alt);
            if (ca < c) {
                c = ca;
                best = alt;
            }
        }
        cost = c;
        return best;
    };

    auto push_edges_of = [&](uint32_t u) {
        for (uint32_t w : em.ring(u)) {
            double cost;
            best_target(u, w, cost);
            heap.push({cost, std::min(u, w), std::max(u, w), version[u] + version[w]});
        }
    };

    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) {
            uint32_t a = f[e], b = f[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            if (!seen.insert({a, b}).second) continue;
            double cost;
            best_target(a, b, cost);
            heap.push({cost, a, b, 0});
        }

    size_t to_remove = static_cast<size_t>(fraction * mesh.vertices.size());
    size_t removed = 0;
    while (removed < to_remove && !heap.empty()) {
        Candidate c = heap.top();
        heap.pop();
        if (!em.v_alive[c.u] || !em.v_alive[c.v]) continue;
        if (c.stamp != version[c.u] + version[c.v]) continue;  // stale entry
        if (!em.collapse_ok(c.u, c.v)) continue;

        double cost;
        Vec3 pos = best_target(c.u, c.v, cost);
        if (em.would_flip(c.u, c.v, pos) || em.would_flip(c.v, c.u, pos)) continue;

        quadrics[c.v] += quadrics[c.u];
        em.collapse(c.u, c.v, pos);
        ++version[c.v];
        ++removed;
        push_edges_of(c.v);
    }

    TriangleMesh out = em.to_mesh();
    if (!mesh.normals.empty()) compute_vertex_normals(out);
    return out;
}

// ---------------------------------------------------------------------------
// Incremental isotropic remeshing.

TriangleMesh remesh(const TriangleMesh& mesh, double target_edge_length, int iterations) {
    if (!(target_edge_length > 0.0))
        throw InvalidArgumentError("remesh: target edge length must be positive");
    if (iterations < 0) throw InvalidArgumentError("remesh: iterations must be >= 0");
    mesh.validate();
    if (mesh.faces.empty()) throw InvalidMeshError("remesh: mesh has no faces");
    TriangleMesh copy = mesh;
    if (iterations == 0) return copy;

    // Reject non-manifold input: every edge must border at most two faces.
    {
        std::map<std::pair<uint32_t, uint32_t>, int> edge_count;
        for (const auto& f : mesh.faces)
            for (int e = 0; e < 3; ++e) {
                uint32_t a = f[e], b = f[(e + 1) % 3];
                if (++edge_count[{std::min(a, b), std::max(a, b)}] > 2)
                    throw InvalidMeshError("remesh: non-manifold edge");
            }
    }

    SurfaceQueryIndex index(mesh);
    EditMesh em(mesh);
    double high = 4.0 / 3.0 * target_edge_length;
    double low = 4.0 / 5.0 * target_edge_length;

    auto alive_edges = [&]() {
        std::set<std::pair<uint32_t, uint32_t>> edges;
        for (uint32_t f = 0; f < em.faces.size(); ++f) {
            if (!em.f_alive[f]) continue;
            const auto& t = em.faces[f];
            for (int e = 0; e < 3; ++e) {
                uint32_t a = t[e], b = t[(e + 1) % 3];
                edges.insert({std::min(a, b), std::max(a, b)});
            }
        }
        return edges;
    };

    for (int it = 0; it < iterations; ++it) {
        // 1. Split long edges.
        for (auto [u, v] : alive_edges()) {
            if (!em.v_alive[u] || !em.v_alive[v] || !em.has_edge(u, v)) continue;
            if (norm(em.vertices[u] - em.vertices[v]) > high)
                em.split(u, v, 0.5 * (em.vertices[u] + em.vertices[v]));
        }
        // 2. Collapse short edges (skip if the collapse would create a long edge).
        for (auto [u, v] : alive_edges()) {
            if (!em.v_alive[u] || !em.v_alive[v] || !em.has_edge(u, v)) continue;
            if (norm(em.vertices[u] - em.vertices[v]) >= low) continue;
            Vec3 mid = 0.5 * (em.vertices[u] + em.vertices[v]);
            bool too_long = false;
            for (uint32_t w : em.ring(u))
                if (w != v && norm(em.vertices[w] - mid) > high) too_long = true;
            for (uint32_t w : em.ring(v))
                if (w != u && norm(em.vertices[w] - mid) > high) too_long = true;
            if (too_long || !em.collapse_ok(u, v)) continue;
            if (em.would_flip(v, u, mid) || em.would_flip(u, v, mid)) continue;
            em.collapse(u, v, mid);
        }
        // 3. Flip edges that reduce deviation from valence 6.
        for (auto [u, v] : alive_edges()) {
            if (!em.v_alive[u] || !em.v_alive[v] || !em.has_edge(u, v)) continue;
            std::vector<uint32_t> opp;
            em.prune(u);
            for (uint32_t f : em.v_faces[u]) {
                const auto& t = em.faces[f];
                if (t[0] == v || t[1] == v || t[2] == v)
                    for (uint32_t w : t)
                        if (w != u && w != v) opp.push_back(w);
            }
            if (opp.size() != 2) continue;
            auto dev = [&](uint32_t w, int delta) {
                long val = static_cast<long>(em.valence(w)) + delta;
                return (val - 6) * (val - 6);
            };
            long before = dev(u, 0) + dev(v, 0) + dev(opp[0], 0) + dev(opp[1], 0);
            long after = dev(u, -1) + dev(v, -1) + dev(opp[0], 1) + dev(opp[1], 1);
            if (after < before) em.flip(u, v);
        }
        // 4. Tangential relaxation + projection to the input surface.
        std::vector<Vec3> relaxed = em.vertices;
        for (uint32_t v = 0; v < em.vertices.size(); ++v) {
            if (!em.v_alive[v]) continue;
            auto ring = em.ring(v);
            if (ring.empty()) continue;
            Vec3 c{0, 0, 0};
            for (uint32_t w : ring) c += em.vertices[w];
            c = c * (1.0 / ring.size());
            relaxed[v] = index.nearest(0.5 * (em.vertices[v] + c)).point;
        }
        em.vertices = relaxed;
    }

    TriangleMesh out = em.to_mesh();
    out.validate();
    if (!mesh.normals.empty()) compute_vertex_normals(out);
    return out;
}

// ---------------------------------------------------------------------------

AttackSpec AttackSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw InvalidArgumentError("attack spec: empty");

    auto num = [&](size_t i) {
        if (i >= parts.size())
            throw InvalidArgumentError("attack spec '" + text + "': missing argument");
        try {
            size_t pos = 0;
            double v = std::stod(parts[i], &pos);
            if (pos != parts[i].size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw InvalidArgumentError("attack spec '" + text + "': bad number '" + parts[i] + "'");
        }
    };

    AttackSpec spec;
    const std::string& name = parts[0];
    if (name == "gaussian") {
        spec.kind = Kind::Gaussian;
        spec.a = num(1);
    } else if (name == "rotate") {
        spec.kind = Kind::Rotate;
        spec.a = num(1);
    } else if (name == "scale") {
        spec.kind = Kind::Scale;
        spec.a = num(1);
    } else if (name == "translate") {
        spec.kind = Kind::Translate;
        spec.a = num(1);
    } else if (name == "combined") {
        spec.kind = Kind::Combined;
    } else if (name == "quantize") {
        spec.kind = Kind::Quantize;
        spec.a = num(1);
    } else if (name == "simplify") {
        spec.kind = Kind::Simplify;
        spec.a = num(1);
    } else if (name == "smooth") {
        spec.kind = Kind::Smooth;
        spec.a = num(1);
        if (parts.size() > 2) {
            spec.b = num(2);
            spec.has_b = true;
        }
    } else if (name == "remesh") {
        spec.kind = Kind::Remesh;
        spec.a = num(1);
        if (parts.size() > 2) {
            spec.b = num(2);
            spec.has_b = true;
        }
    } else {
        throw InvalidArgumentError("attack spec: unknown attack '" + name + "'");
    }
    return spec;
}

std::string AttackSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Gaussian: os << "gaussian:" << a; break;
        case Kind::Rotate: os << "rotate:" << a; break;
        case Kind::Scale: os << "scale:" << a; break;
        case Kind::Translate: os << "translate:" << a; break;
        case Kind::Combined: os << "combined"; break;
        case Kind::Quantize: os << "quantize:" << a; break;
        case Kind::Simplify: os << "simplify:" << a; break;
        case Kind::Smooth:
            os << "smooth:" << a;
            if (has_b) os << ":" << b;
            break;
        case Kind::Remesh:
            os << "remesh:" << a;
            if (has_b) os << ":" << b;
            break;
    }
    return os.str();
}

TriangleMesh apply_attack(const TriangleMesh& mesh, const AttackSpec& spec, uint64_t seed) {
    Rng rng(seed);
    switch (spec.kind) {
        case AttackSpec::Kind::Gaussian:
            return gaussian_noise(mesh, spec.a, seed);
        case AttackSpec::Kind::Rotate: {
            SimilarityTransform t;
            t.axis = rng.uniform_direction();
            t.angle = spec.a * M_PI / 180.0;
            return affine(mesh, t);
        }
        case AttackSpec::Kind::Scale: {
            SimilarityTransform t;
            t.scale = spec.a;
            if (!(t.scale > 0.0)) throw InvalidArgumentError("scale attack: factor must be > 0");
            return affine(mesh, t);
        }
        case AttackSpec::Kind::Translate: {
            SimilarityTransform t;
            double d = spec.a;
            t.translation = {d * (2.0 * rng.uniform() - 1.0), d * (2.0 * rng.uniform() - 1.0),
                             d * (2.0 * rng.uniform() - 1.0)};
            return affine(mesh, t);
        }
        case AttackSpec::Kind::Combined: {
            SimilarityTransform t;
            t.axis = rng.uniform_direction();
            t.angle = rng.uniform() * M_PI;
            t.scale = std::exp(std::log(0.8) + rng.uniform() * (std::log(1.25) - std::log(0.8)));
            t.translation = {0.2 * rng.uniform() - 0.1, 0.2 * rng.uniform() - 0.1,
                             0.2 * rng.uniform() - 0.1};
            return affine(mesh, t);
        }
        case AttackSpec::Kind::Quantize:
            return quantize(mesh, static_cast<int>(spec.a));
        case AttackSpec::Kind::Simplify:
            return simplify(mesh, spec.a);
        case AttackSpec::Kind::Smooth:
            return smooth(mesh, static_cast<int>(spec.a), spec.has_b ? spec.b : 0.5);
        case AttackSpec::Kind::Remesh:
            return remesh(mesh, spec.a, spec.has_b ? static_cast<int>(spec.b) : 3);
    }
    throw InvalidArgumentError("attack spec: unknown kind");
}

}  // namespace funcmark
