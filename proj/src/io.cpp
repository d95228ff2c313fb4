#include "funcmark/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace funcmark {

namespace {

[[noreturn]] void parse_fail(const std::string& path, size_t line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

// OBJ face corners are `v`, `v/t`, `v//n`, or `v/t/n`; only the vertex index
// matters here.
uint32_t face_index(const std::string& token, size_t n_vertices, const std::string& path,
                    size_t line) {
    size_t slash = token.find('/');
    std::string head = slash == std::string::npos ? token : token.substr(0, slash);
    long idx = 0;
    try {
        size_t pos = 0;
        idx = std::stol(head, &pos);
        if (pos != head.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        parse_fail(path, line, "bad face index '" + token + "'");
    }
    if (idx < 0) idx += static_cast<long>(n_vertices) + 1;  // relative indexing
    if (idx < 1 || static_cast<size_t>(idx) > n_vertices)
        parse_fail(path, line, "face index " + head + " out of range");
    return static_cast<uint32_t>(idx - 1);
}

}  // namespace

TriangleMesh read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    TriangleMesh mesh;
    std::vector<Vec3> file_normals;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ss >> v.x >> v.y >> v.z)) parse_fail(path, lineno, "bad vertex record");
            mesh.vertices.push_back(v);
        } else if (tag == "vn") {
            Vec3 n;
            if (!(ss >> n.x >> n.y >> n.z)) parse_fail(path, lineno, "bad normal record");
            file_normals.push_back(n);
        } else if (tag == "f") {
            std::vector<uint32_t> corners;
            std::string token;
            while (ss >> token)
                corners.push_back(face_index(token, mesh.vertices.size(), path, lineno));
            if (corners.size() < 3) parse_fail(path, lineno, "face needs at least 3 corners");
            // Fan-triangulate polygons.
            for (size_t k = 2; k < corners.size(); ++k)
                mesh.faces.push_back({corners[0], corners[k - 1], corners[k]});
        }
        // Other records (vt, o, g, s, mtllib, usemtl) are ignored.
    }
    // Normals are kept only when they map 1:1 onto vertices (the layout this
    // writer produces).
    if (file_normals.size() == mesh.vertices.size()) mesh.normals = std::move(file_normals);
    mesh.validate();
    return mesh;
}

void write_obj(const std::string& path, const TriangleMesh& mesh) {
    mesh.validate();
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open for writing");
    char buf[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        out << buf;
    }
    for (const Vec3& n : mesh.normals) {
        std::snprintf(buf, sizeof buf, "vn %.9g %.9g %.9g\n", n.x, n.y, n.z);
        out << buf;
    }
    bool with_normals = mesh.has_normals();
    for (const auto& f : mesh.faces) {
        if (with_normals)
            out << "f " << f[0] + 1 << "//" << f[0] + 1 << ' ' << f[1] + 1 << "//" << f[1] + 1
                << ' ' << f[2] + 1 << "//" << f[2] + 1 << '\n';
        else
            out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
    if (!out) throw FormatError(path + ": write failed");
}

namespace {

constexpr char kGridMagic[4] = {'F', 'M', 'G', 'D'};
constexpr uint32_t kGridVersion = 1;

template <typename T>
void read_raw(std::ifstream& in, T* dst, size_t count, const std::string& path,
              size_t& offset, size_t expected_total) {
    in.read(reinterpret_cast<char*>(dst), count * sizeof(T));
    if (static_cast<size_t>(in.gcount()) != count * sizeof(T))
        throw FormatError(path + ": truncated, expected " + std::to_string(expected_total) +
                          " bytes but file ends at " +
                          std::to_string(offset + static_cast<size_t>(in.gcount())));
    offset += count * sizeof(T);
}

}  // namespace

GridField read_grid(const std::string& path) {
    static_assert(sizeof(float) == 4 && sizeof(double) == 8);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open");

    size_t offset = 0;
    char magic[4];
    // Header: magic + version + dims + bbox.
    size_t header = 4 + 4 + 12 + 48;
    read_raw(in, magic, 4, path, offset, header);
    if (std::memcmp(magic, kGridMagic, 4) != 0)
        throw FormatError(path + ": bad magic, not an FMGD file");
    uint32_t version;
    read_raw(in, &version, 1, path, offset, header);
    if (version != kGridVersion)
        throw FormatError(path + ": unsupported version " + std::to_string(version));
    std::array<uint32_t, 3> dims;
    read_raw(in, dims.data(), 3, path, offset, header);
    double bbox[6];
    read_raw(in, bbox, 6, path, offset, header);

    size_t n = size_t(dims[0]) * dims[1] * dims[2];
    if (n == 0 || n > (size_t(1) << 33))
        throw FormatError(path + ": implausible dimensions");
    std::vector<float> values(n);
    read_raw(in, values.data(), n, path, offset, header + n * 4);

    return GridField(dims, {bbox[0], bbox[1], bbox[2]}, {bbox[3], bbox[4], bbox[5]},
                     std::move(values));
}

void write_grid(const std::string& path, const GridField& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out.write(kGridMagic, 4);
    uint32_t version = kGridVersion;
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(grid.dims().data()), 12);
    double bbox[6] = {grid.bbox_min().x, grid.bbox_min().y, grid.bbox_min().z,
                      grid.bbox_max().x, grid.bbox_max().y, grid.bbox_max().z};
    out.write(reinterpret_cast<const char*>(bbox), 48);
    out.write(reinterpret_cast<const char*>(grid.values().data()),
              grid.values().size() * sizeof(float));
    if (!out) throw FormatError(path + ": write failed");
}

std::vector<Vec3> read_ply_points(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open");
    std::string line;
    size_t count = 0;
    bool in_vertex_element = false;
    std::vector<std::string> props;
    if (!std::getline(in, line) || line != "ply") throw FormatError(path + ": not a PLY file");
    if (!std::getline(in, line) || line != "format binary_little_endian 1.0")
        throw FormatError(path + ": only binary little-endian PLY is supported");
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "end_header") break;
        if (tag == "comment") continue;
        if (tag == "element") {
            std::string name;
            ss >> name >> count;
            in_vertex_element = name == "vertex";
            if (!in_vertex_element) throw FormatError(path + ": unsupported element '" + name + "'");
        } else if (tag == "property" && in_vertex_element) {
            std::string type, name;
            ss >> type >> name;
            if (type != "float")
                throw FormatError(path + ": unsupported property type '" + type + "'");
            props.push_back(name);
        }
    }
    if (props != std::vector<std::string>{"x", "y", "z"})
        throw FormatError(path + ": expected float x/y/z properties");

    std::vector<Vec3> points(count);
    std::vector<float> raw(count * 3);
    in.read(reinterpret_cast<char*>(raw.data()), raw.size() * sizeof(float));
    if (static_cast<size_t>(in.gcount()) != raw.size() * sizeof(float))
        throw FormatError(path + ": truncated vertex data");
    for (size_t i = 0; i < count; ++i)
        points[i] = {raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
    return points;
}

void write_ply_points(const std::string& path, const std::vector<Vec3>& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << points.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\nend_header\n";
    std::vector<float> raw;
    raw.reserve(points.size() * 3);
    for (const Vec3& p : points) {
        raw.push_back(static_cast<float>(p.x));
        raw.push_back(static_cast<float>(p.y));
        raw.push_back(static_cast<float>(p.z));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size() * sizeof(float));
    if (!out) throw FormatError(path + ": write failed");
}

LayoutSecret read_layout(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        LayoutSecret s;
        std::vector<uint8_t> message = j.at("message").get<std::vector<uint8_t>>();
        s.layout = PartitionLayout(j.at("n_s").get<int>(), std::move(message),
                                   j.at("delta").get<double>());
        s.seed = j.at("seed").get<uint64_t>();
        s.field_fingerprint = j.value("field_fingerprint", std::string{});
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_layout(const std::string& path, const LayoutSecret& secret) {
    nlohmann::json j{
        {"n_s", secret.layout.n_s},
        {"delta", secret.layout.delta},
        {"message", secret.layout.message},
        {"seed", secret.seed},
        {"field_fingerprint", secret.field_fingerprint},
    };
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << j.dump(2) << '\n';
    if (!out) throw FormatError(path + ": write failed");
}

std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open");
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<uint8_t>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace funcmark
