#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "funcmark/attack.hpp"
#include "funcmark/embed.hpp"
#include "funcmark/io.hpp"
#include "funcmark/metrics.hpp"
#include "funcmark/parallel.hpp"
#include "funcmark/shapes.hpp"
#include "funcmark/surface.hpp"
#include "funcmark/verify.hpp"
#include "funcmark/version.hpp"

namespace py = pybind11;
using namespace funcmark;

namespace {

// A field handle usable by every operation; `grid` is set when the field is
// backed by a baked grid (and can therefore be saved).
struct Field {
    std::shared_ptr<const ScalarField> ptr;
    std::shared_ptr<const GridField> grid;

    const ScalarField& ref() const {
        if (!ptr) throw InvalidArgumentError("field handle is empty");
        return *ptr;
    }
};

Vec3 to_vec3(py::handle obj) {
    auto seq = py::cast<std::array<double, 3>>(obj);
    return {seq[0], seq[1], seq[2]};
}

std::vector<Vec3> to_points(const py::array_t<double>& arr) {
    auto a = arr.unchecked<2>();
    if (a.shape(1) != 3) throw InvalidArgumentError("points must have shape (n, 3)");
    std::vector<Vec3> pts(a.shape(0));
    for (py::ssize_t i = 0; i < a.shape(0); ++i) pts[i] = {a(i, 0), a(i, 1), a(i, 2)};
    return pts;
}

py::array_t<double> from_points(const std::vector<Vec3>& pts) {
    py::array_t<double> arr({pts.size(), size_t(3)});
    auto a = arr.mutable_unchecked<2>();
    for (size_t i = 0; i < pts.size(); ++i)
        for (int c = 0; c < 3; ++c) a(i, c) = pts[i][c];
    return arr;
}

TriangleMesh to_mesh(const py::array_t<double>& v, const py::array_t<uint32_t>& f,
                     const std::optional<py::array_t<double>>& n) {
    TriangleMesh m;
    m.vertices = to_points(v);
    auto fa = f.unchecked<2>();
    if (fa.shape(1) != 3) throw InvalidArgumentError("faces must have shape (m, 3)");
    m.faces.resize(fa.shape(0));
    for (py::ssize_t i = 0; i < fa.shape(0); ++i) m.faces[i] = {fa(i, 0), fa(i, 1), fa(i, 2)};
    if (n) m.normals = to_points(*n);
    m.validate();
    return m;
}

py::tuple from_mesh(const TriangleMesh& m) {
    py::array_t<uint32_t> f({m.faces.size(), size_t(3)});
    auto fa = f.mutable_unchecked<2>();
    for (size_t i = 0; i < m.faces.size(); ++i)
        for (int c = 0; c < 3; ++c) fa(i, c) = m.faces[i][c];
    py::object normals = m.has_normals() ? py::object(from_points(m.normals)) : py::none();
    return py::make_tuple(from_points(m.vertices), f, normals);
}

py::dict detection_dict(const DetectionReport& r) {
    py::dict d;
    d["n_points"] = r.n_points;
    d["matches"] = r.matches;
    d["z_score"] = r.z_score;
    d["threshold"] = r.threshold;
    d["reject_h0"] = r.reject_h0;
    d["bit_accuracy"] = r.bit_accuracy;
    return d;
}

}  // namespace

PYBIND11_MODULE(_funcmark, m) {
    m.doc() = "watermarking of signed distance fields by analytic surface deformation";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "FuncmarkError", PyExc_RuntimeError);

    py::class_<PartitionLayout>(m, "PartitionLayout")
        .def(py::init<int, std::vector<uint8_t>, double>(), py::arg("n_s"), py::arg("message"),
             py::arg("delta"))
        .def_readonly("n_s", &PartitionLayout::n_s)
        .def_readonly("message", &PartitionLayout::message)
        .def_readonly("delta", &PartitionLayout::delta);

    py::class_<Field>(m, "Field")
        .def("eval",
             [](const Field& f, py::handle p) { return f.ref().eval(to_vec3(p)); },
             py::arg("point"))
        .def("gradient",
             [](const Field& f, py::handle p) {
                 Vec3 g = f.ref().gradient(to_vec3(p));
                 return py::make_tuple(g.x, g.y, g.z);
             },
             py::arg("point"))
        .def("save", [](const Field& f, const std::string& path) {
            if (!f.grid) throw InvalidArgumentError("only grid-backed fields can be saved");
            write_grid(path, *f.grid);
        });

    m.def("shape", [](const std::string& spec) {
        return Field{make_shape(spec), nullptr};
    }, py::arg("spec"), "analytic shape: sphere[:cx,cy,cz,r], torus[:cx,cy,cz,R,r], blend");

    m.def("load_grid", [](const std::string& path) {
        auto g = std::make_shared<GridField>(read_grid(path));
        return Field{g, g};
    }, py::arg("path"));

    m.def("bake", [](const Field& f, uint32_t dims) {
        auto g = std::make_shared<GridField>(bake_grid(
            f.ref(), {dims, dims, dims}, kDefaultExtractionBoxMin, kDefaultExtractionBoxMax));
        return Field{g, g};
    }, py::arg("field"), py::arg("dims") = 128);

    m.def("embed", [](const Field& base, const PartitionLayout& layout, uint32_t dims) {
        if (!base.ptr) throw InvalidArgumentError("field handle is empty");
        WatermarkedField wf(base.ptr, layout);
        BakeReport report;
        auto g = std::make_shared<GridField>(
            bake_watermarked(wf, {dims, dims, dims}, kDefaultExtractionBoxMin,
                             kDefaultExtractionBoxMax, &report));
        return py::make_tuple(Field{g, g}, report.failure_fraction());
    }, py::arg("field"), py::arg("layout"), py::arg("dims") = 128,
       "returns (watermarked_field, newton_failure_fraction)");

    m.def("extract", [](const Field& f, uint32_t resolution, const std::string& method) {
        if (method == "mc") return from_mesh(marching_cubes(f.ref(), resolution));
        if (method == "dc") return from_mesh(dual_contouring(f.ref(), resolution));
        throw InvalidArgumentError("method must be 'mc' or 'dc'");
    }, py::arg("field"), py::arg("resolution") = 128, py::arg("method") = "mc",
       "returns (vertices, faces, normals)");

    m.def("sample_surface", [](const Field& f, size_t n, uint64_t seed) {
        return from_points(sample_surface(f.ref(), n, seed).points);
    }, py::arg("field"), py::arg("n"), py::arg("seed") = 0);

    m.def("deform", [](const Field& base, const PartitionLayout& layout,
                       const py::array_t<double>& points) {
        std::vector<Vec3> out;
        for (const Vec3& y : to_points(points)) out.push_back(deform(y, base.ref(), layout));
        return from_points(out);
    }, py::arg("field"), py::arg("layout"), py::arg("points"));

    m.def("decode", [](const py::array_t<double>& points, const Field& base,
                       const PartitionLayout& layout) {
        DecodeResult r = decode(to_points(points), base.ref(), layout);
        py::dict d;
        d["bit_accuracy"] = r.bit_accuracy;
        d["decodable_partitions"] = r.decodable_partitions;
        std::vector<std::optional<uint8_t>> msg(r.message.begin(), r.message.end());
        d["message"] = msg;
        return d;
    }, py::arg("points"), py::arg("field"), py::arg("layout"));

    m.def("detect", [](const py::array_t<double>& points, const Field& base,
                       const PartitionLayout& layout, double alpha) {
        return detection_dict(detect(to_points(points), base.ref(), layout, alpha));
    }, py::arg("points"), py::arg("field"), py::arg("layout"), py::arg("alpha") = 0.001);

    m.def("align", [](const py::array_t<double>& v, const py::array_t<uint32_t>& f,
                      const Field& wm) {
        AlignmentResult r = align(to_mesh(v, f, std::nullopt), wm.ref());
        py::dict d;
        d["scale"] = r.transform.scale;
        d["angle"] = r.transform.angle;
        d["axis"] = py::make_tuple(r.transform.axis.x, r.transform.axis.y, r.transform.axis.z);
        d["translation"] = py::make_tuple(r.transform.translation.x, r.transform.translation.y,
                                          r.transform.translation.z);
        d["residual"] = r.residual;
        d["aligned_vertices"] = from_points(r.aligned.vertices);
        return d;
    }, py::arg("vertices"), py::arg("faces"), py::arg("field"));

    m.def("attack", [](const py::array_t<double>& v, const py::array_t<uint32_t>& f,
                       const std::string& spec, uint64_t seed) {
        return from_mesh(apply_attack(to_mesh(v, f, std::nullopt), AttackSpec::parse(spec), seed));
    }, py::arg("vertices"), py::arg("faces"), py::arg("spec"), py::arg("seed") = 0);

    m.def("chamfer", [](const py::array_t<double>& va, const py::array_t<uint32_t>& fa,
                        const py::array_t<double>& vb, const py::array_t<uint32_t>& fb,
                        size_t n_samples, uint64_t seed) {
        return chamfer(to_mesh(va, fa, std::nullopt), to_mesh(vb, fb, std::nullopt), n_samples,
                       seed);
    }, py::arg("vertices_a"), py::arg("faces_a"), py::arg("vertices_b"), py::arg("faces_b"),
       py::arg("n_samples") = 30000, py::arg("seed") = 0);

    m.def("p2s", [](const py::array_t<double>& points, const py::array_t<double>& v,
                    const py::array_t<uint32_t>& f) {
        return p2s(to_points(points), to_mesh(v, f, std::nullopt));
    }, py::arg("points"), py::arg("vertices"), py::arg("faces"));

    m.def("read_obj", [](const std::string& path) { return from_mesh(read_obj(path)); },
          py::arg("path"));
    m.def("write_obj", [](const std::string& path, const py::array_t<double>& v,
                          const py::array_t<uint32_t>& f,
                          const std::optional<py::array_t<double>>& n) {
        write_obj(path, to_mesh(v, f, n));
    }, py::arg("path"), py::arg("vertices"), py::arg("faces"),
       py::arg("normals") = std::nullopt);

    m.def("set_threads", &set_thread_count, py::arg("n"),
          "worker threads for baking/extraction (0 = hardware concurrency)");
}
