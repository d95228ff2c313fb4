#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "funcmark/embed.hpp"
#include "funcmark/io.hpp"
#include "funcmark/shapes.hpp"
#include "funcmark/surface.hpp"

using namespace funcmark;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("funcmark_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("obj round trip with normals") {
    TempDir tmp;
    auto sphere = make_shape("sphere");
    TriangleMesh m = marching_cubes(*sphere, 24);
    write_obj(tmp.file("m.obj"), m);
    TriangleMesh back = read_obj(tmp.file("m.obj"));
    REQUIRE(back.vertices.size() == m.vertices.size());
    REQUIRE(back.faces == m.faces);
    REQUIRE(back.normals.size() == m.normals.size());
    for (size_t i = 0; i < m.vertices.size(); ++i) {
        CHECK(norm(back.vertices[i] - m.vertices[i]) <= 1e-6);
        CHECK(norm(back.normals[i] - m.normals[i]) <= 1e-6);
    }
}

TEST_CASE("obj parser: quads triangulate, negative indices resolve") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("quad.obj"));
        out << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n";
        out << "f 1 2 3 4\n";
        out << "v 0 0 1\nf -1 -4 -3\n";
    }
    TriangleMesh m = read_obj(tmp.file("quad.obj"));
    CHECK(m.vertices.size() == 5);
    REQUIRE(m.faces.size() == 3);  // quad fan = 2 triangles, plus one more
    CHECK(m.faces[0] == std::array<uint32_t, 3>{0, 1, 2});
    CHECK(m.faces[1] == std::array<uint32_t, 3>{0, 2, 3});
    CHECK(m.faces[2] == std::array<uint32_t, 3>{4, 1, 2});
}

TEST_CASE("obj parser: malformed input reports the line number") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("bad.obj"));
        out << "v 0 0 0\nv 1 0 0\nf 1 2 99\n";
    }
    try {
        read_obj(tmp.file("bad.obj"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    {
        std::ofstream out(tmp.file("bad2.obj"));
        out << "v 0 0\n";
    }
    CHECK_THROWS_AS(read_obj(tmp.file("bad2.obj")), ParseError);
    CHECK_THROWS_AS(read_obj(tmp.file("missing.obj")), Error);
}

TEST_CASE("grid container: byte-exact round trip") {
    TempDir tmp;
    auto sphere = make_shape("sphere");
    GridField g = bake_grid(*sphere, {16, 20, 24}, {-1, -1.1, -1.2}, {1, 1.1, 1.2});
    write_grid(tmp.file("g.fmgd"), g);
    GridField back = read_grid(tmp.file("g.fmgd"));
    CHECK(back.values() == g.values());
    CHECK(back.dims() == g.dims());
    write_grid(tmp.file("g2.fmgd"), back);
    CHECK(slurp(tmp.file("g.fmgd")) == slurp(tmp.file("g2.fmgd")));
    // interpolation agrees after the round trip
    CHECK(back.eval({0.1, -0.2, 0.3}) == doctest::Approx(g.eval({0.1, -0.2, 0.3})).epsilon(1e-12));
}

TEST_CASE("grid container: wrong magic and truncation are rejected") {
    TempDir tmp;
    auto sphere = make_shape("sphere");
    GridField g = bake_grid(*sphere, {8, 8, 8}, {-1, -1, -1}, {1, 1, 1});
    write_grid(tmp.file("g.fmgd"), g);

    auto bytes = slurp(tmp.file("g.fmgd"));
    auto corrupted = bytes;
    corrupted[0] = 'X';
    std::ofstream(tmp.file("magic.fmgd"), std::ios::binary)
        .write(corrupted.data(), std::streamsize(corrupted.size()));
    CHECK_THROWS_AS(read_grid(tmp.file("magic.fmgd")), FormatError);

    std::ofstream(tmp.file("short.fmgd"), std::ios::binary)
        .write(bytes.data(), std::streamsize(bytes.size() / 2));
    try {
        read_grid(tmp.file("short.fmgd"));
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        // the message names expected vs actual sizes
        CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
}

TEST_CASE("ply points: binary round trip") {
    TempDir tmp;
    std::vector<Vec3> pts{{0.125, -0.25, 0.5}, {1e-3, 2e-3, -3e-3}, {0, 0, 0}};
    write_ply_points(tmp.file("p.ply"), pts);
    std::vector<Vec3> back = read_ply_points(tmp.file("p.ply"));
    REQUIRE(back.size() == pts.size());
    for (size_t i = 0; i < pts.size(); ++i) CHECK(norm(back[i] - pts[i]) <= 1e-6);
    // header says binary little-endian
    auto bytes = slurp(tmp.file("p.ply"));
    std::string head(bytes.begin(), bytes.begin() + std::min<size_t>(bytes.size(), 200));
    CHECK(head.find("binary_little_endian") != std::string::npos);
}

TEST_CASE("layout secret: json round trip") {
    TempDir tmp;
    LayoutSecret s;
    s.layout = PartitionLayout(32, {1, 0, 1, 1, 0, 0, 1, 0}, 0.0005);
    s.seed = 123456789;
    s.field_fingerprint = "0123456789abcdef";
    write_layout(tmp.file("s.json"), s);
    LayoutSecret back = read_layout(tmp.file("s.json"));
    CHECK(back == s);

    std::ofstream(tmp.file("junk.json")) << "{ not json";
    CHECK_THROWS_AS(read_layout(tmp.file("junk.json")), ParseError);
}

TEST_CASE("file fingerprint: stable and content-sensitive") {
    TempDir tmp;
    std::ofstream(tmp.file("a.bin"), std::ios::binary) << "watermark";
    std::ofstream(tmp.file("b.bin"), std::ios::binary) << "watermark";
    std::ofstream(tmp.file("c.bin"), std::ios::binary) << "watermarl";
    std::string fa = file_fingerprint(tmp.file("a.bin"));
    CHECK(fa.size() == 16);
    CHECK(fa == file_fingerprint(tmp.file("b.bin")));
    CHECK(fa != file_fingerprint(tmp.file("c.bin")));
}
