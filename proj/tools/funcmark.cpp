#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "funcmark/attack.hpp"
#include "funcmark/bench.hpp"
#include "funcmark/embed.hpp"
#include "funcmark/io.hpp"
#include "funcmark/metrics.hpp"
#include "funcmark/parallel.hpp"
#include "funcmark/rng.hpp"
#include "funcmark/shapes.hpp"
#include "funcmark/surface.hpp"
#include "funcmark/verify.hpp"
#include "funcmark/version.hpp"

namespace {

using namespace funcmark;

enum ExitCode { kOk = 0, kInvalidInput = 2, kVerificationNegative = 3, kNumericalFailure = 4 };

int g_log_level = 1;  // 0 debug, 1 info, 2 warn, 3 error

void log_at(int level, const std::string& msg) {
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (level >= g_log_level)
        std::cerr << "funcmark [" << names[level] << "] " << msg << "\n";
}

int parse_log_level(const std::string& name) {
    if (name == "debug") return 0;
    if (name == "info") return 1;
    if (name == "warn") return 2;
    if (name == "error") return 3;
    throw InvalidArgumentError("unknown log level '" + name + "'");
}

std::vector<uint8_t> hex_to_bits(const std::string& hex) {
    std::vector<uint8_t> bits;
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw InvalidArgumentError("message: bad hex digit '" + std::string(1, c) + "'");
        for (int k = 3; k >= 0; --k) bits.push_back((v >> k) & 1);
    }
    if (bits.empty()) throw InvalidArgumentError("message: empty");
    return bits;
}

std::string bits_to_hex(const std::vector<std::optional<uint8_t>>& bits) {
    std::string hex;
    for (size_t i = 0; i < bits.size(); i += 4) {
        int v = 0;
        for (size_t k = 0; k < 4 && i + k < bits.size(); ++k)
            v = (v << 1) | (bits[i + k].value_or(0) & 1);
        hex += "0123456789abcdef"[v];
    }
    return hex;
}

// Original/watermarked field inputs: a .fmgd grid file or a shape spec.
std::shared_ptr<const ScalarField> load_field(const std::string& grid_path,
                                              const std::string& primitive) {
    if (!grid_path.empty() && !primitive.empty())
        throw InvalidArgumentError("give either a field file or a primitive spec, not both");
    if (!grid_path.empty()) return std::make_shared<GridField>(read_grid(grid_path));
    if (!primitive.empty()) return make_shape(primitive);
    throw InvalidArgumentError("a field file or a primitive spec is required");
}

nlohmann::json detection_json(const DetectionReport& report) {
    size_t undecodable = 0;
    for (const auto& b : report.decoded_bits)
        if (!b) ++undecodable;
    return nlohmann::json{
        {"n_points", report.n_points},
        {"matches", report.matches},
        {"z_score", report.z_score},
        {"threshold", report.threshold},
        {"verdict", report.reject_h0 ? "reject" : "accept"},
        {"bit_accuracy", report.bit_accuracy},
        {"undecodable_partitions", undecodable},
    };
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << j.dump(2) << '\n';
}

int run(int argc, char** argv) {
    CLI::App app{"funcmark: watermark signed distance fields by analytic surface deformation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    uint64_t seed = 0;
    int threads = 0;
    std::string log_level = "info";
    app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
    app.add_option("--log-level", log_level, "debug|info|warn|error")->capture_default_str();

    // ---- embed ----
    auto* embed = app.add_subcommand("embed", "embed a message and bake the watermarked field");
    std::string embed_field, embed_primitive, embed_message, embed_out, embed_report,
        embed_layout;
    int embed_ns = 32;
    double embed_delta = 0.001;
    uint32_t embed_dims = 128;
    embed->add_option("--field", embed_field, "original field (.fmgd)");
    embed->add_option("--primitive", embed_primitive, "analytic shape spec");
    embed->add_option("--message", embed_message, "message bits as hex")->required();
    embed->add_option("--ns", embed_ns, "partition grid size")->capture_default_str();
    embed->add_option("--delta", embed_delta, "watermark strength")->capture_default_str();
    embed->add_option("--bake-dims", embed_dims, "bake resolution")->capture_default_str();
    embed->add_option("--out", embed_out, "watermarked field output (.fmgd)")->required();
    embed->add_option("--report", embed_report, "bake report JSON");
    embed->add_option("--layout", embed_layout, "layout secret sidecar JSON");

    // ---- bake ----
    auto* bake = app.add_subcommand("bake", "sample an analytic shape to a grid field");
    std::string bake_primitive, bake_out;
    uint32_t bake_dims = 128;
    bake->add_option("--primitive", bake_primitive, "analytic shape spec")->required();
    bake->add_option("--dims", bake_dims, "grid resolution")->capture_default_str();
    bake->add_option("--out", bake_out, "output field (.fmgd)")->required();

    // ---- extract ----
    auto* extract = app.add_subcommand("extract", "extract the zero isosurface as a mesh");
    std::string ex_field, ex_primitive, ex_iso = "mc", ex_out;
    uint32_t ex_res = 256;
    extract->add_option("--field", ex_field, "field (.fmgd)");
    extract->add_option("--primitive", ex_primitive, "analytic shape spec");
    extract->add_option("--res", ex_res, "lattice resolution")->capture_default_str();
    extract->add_option("--iso", ex_iso, "mc|dc")->capture_default_str();
    extract->add_option("--out", ex_out, "output mesh (.obj)")->required();

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "sample points on the zero surface");
    std::string sm_field, sm_primitive, sm_out;
    size_t sm_n = 30000;
    sample->add_option("--field", sm_field, "field (.fmgd)");
    sample->add_option("--primitive", sm_primitive, "analytic shape spec");
    sample->add_option("-n,--count", sm_n, "sample count")->capture_default_str();
    sample->add_option("--out", sm_out, "output points (.ply)")->required();

    // ---- decode / detect ----
    auto* decode_cmd = app.add_subcommand("decode", "decode the message from a suspect mesh");
    auto* detect_cmd = app.add_subcommand("detect", "hypothesis-test a suspect mesh");
    std::string v_original, v_primitive, v_layout, v_mesh, v_points, v_report;
    double v_alpha = 0.001;
    for (auto* cmd : {decode_cmd, detect_cmd}) {
        cmd->add_option("--original", v_original, "original field (.fmgd)");
        cmd->add_option("--primitive", v_primitive, "original shape spec");
        cmd->add_option("--layout", v_layout, "layout secret JSON")->required();
        cmd->add_option("--mesh", v_mesh, "suspect mesh (.obj)");
        cmd->add_option("--points", v_points, "suspect points (.ply)");
        cmd->add_option("--report", v_report, "report JSON output");
    }
    detect_cmd->add_option("--alpha", v_alpha, "significance level")->capture_default_str();

    // ---- align ----
    auto* align_cmd = app.add_subcommand("align", "similarity-align a suspect mesh to a field");
    std::string al_wm, al_mesh, al_out, al_report;
    align_cmd->add_option("--wm", al_wm, "watermarked field (.fmgd)")->required();
    align_cmd->add_option("--mesh", al_mesh, "suspect mesh (.obj)")->required();
    align_cmd->add_option("--out", al_out, "aligned mesh output (.obj)");
    align_cmd->add_option("--report", al_report, "report JSON output");

    // ---- attack ----
    auto* attack_cmd = app.add_subcommand("attack", "apply a mesh distortion");
    std::string at_mesh, at_spec, at_out;
    attack_cmd->add_option("--mesh", at_mesh, "input mesh (.obj)")->required();
    attack_cmd->add_option("--spec", at_spec, "attack spec, name:arg1[:arg2]")->required();
    attack_cmd->add_option("--out", at_out, "output mesh (.obj)")->required();

    // ---- metrics ----
    auto* metrics_cmd = app.add_subcommand("metrics", "geometry differences between meshes");
    std::string me_a, me_b, me_out;
    metrics_cmd->add_option("--a", me_a, "mesh A (.obj)")->required();
    metrics_cmd->add_option("--b", me_b, "mesh B (.obj)")->required();
    metrics_cmd->add_option("--out", me_out, "metrics JSON output")->required();

    // ---- bench ----
    auto* bench_cmd = app.add_subcommand("bench", "reproduce the evaluation tables");
    BenchScenario scenario;
    std::string be_out;
    bench_cmd->add_option("--shape", scenario.shape, "shape spec")->capture_default_str();
    bench_cmd->add_option("--ns", scenario.n_s, "partition grid size")->capture_default_str();
    bench_cmd->add_option("--bits", scenario.message_bits, "message length")
        ->capture_default_str();
    bench_cmd->add_option("--delta", scenario.delta, "watermark strength")
        ->capture_default_str();
    bench_cmd->add_option("--bake-dims", scenario.bake_dims, "bake resolution")
        ->capture_default_str();
    bench_cmd->add_option("--res", scenario.resolutions, "extraction resolutions")
        ->capture_default_str();
    bench_cmd->add_option("--deltas", scenario.deltas, "delta sweep")->capture_default_str();
    bench_cmd->add_option("--nv", scenario.sample_counts, "sample-count sweep")
        ->capture_default_str();
    bench_cmd->add_option("--attacks", scenario.attacks, "attack sweep")->capture_default_str();
    bench_cmd->add_option("--alpha", scenario.alpha, "significance level")
        ->capture_default_str();
    bench_cmd->add_option("--trials", scenario.trials, "trials per cell")->capture_default_str();
    bench_cmd->add_option("--out", be_out, "output directory")->required();

    // Let the global --seed/--threads/--log-level be written after a
    // subcommand's own options.
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    g_log_level = parse_log_level(log_level);
    set_thread_count(threads);

    if (embed->parsed()) {
        auto base = load_field(embed_field, embed_primitive);
        PartitionLayout layout(embed_ns, hex_to_bits(embed_message), embed_delta);
        WatermarkedField wf(base, layout, NewtonConfig{.seed = seed});
        BakeReport report;
        std::array<uint32_t, 3> dims{embed_dims, embed_dims, embed_dims};
        log_at(1, "baking watermarked field at " + std::to_string(embed_dims) + "^3");
        GridField grid = bake_watermarked(wf, dims, kDefaultExtractionBoxMin,
                                          kDefaultExtractionBoxMax, &report);
        write_grid(embed_out, grid);
        if (!embed_layout.empty()) {
            LayoutSecret secret;
            secret.layout = layout;
            secret.seed = seed;
            if (!embed_field.empty()) secret.field_fingerprint = file_fingerprint(embed_field);
            write_layout(embed_layout, secret);
        }
        if (!embed_report.empty())
            write_json(embed_report,
                       {{"total_nodes", report.total_nodes},
                        {"newton_failures", report.newton_failures},
                        {"failure_fraction", report.failure_fraction()},
                        {"version", kVersion}});
        log_at(1, "newton failure fraction " + std::to_string(report.failure_fraction()));
        return kOk;
    }

    if (bake->parsed()) {
        auto shape = make_shape(bake_primitive);
        std::array<uint32_t, 3> dims{bake_dims, bake_dims, bake_dims};
        write_grid(bake_out,
                   bake_grid(*shape, dims, kDefaultExtractionBoxMin, kDefaultExtractionBoxMax));
        return kOk;
    }

    if (extract->parsed()) {
        auto field = load_field(ex_field, ex_primitive);
        TriangleMesh mesh;
        if (ex_iso == "mc")
            mesh = marching_cubes(*field, ex_res);
        else if (ex_iso == "dc")
            mesh = dual_contouring(*field, ex_res);
        else
            throw InvalidArgumentError("--iso must be mc or dc");
        write_obj(ex_out, mesh);
        log_at(1, std::to_string(mesh.vertices.size()) + " vertices, " +
                      std::to_string(mesh.faces.size()) + " faces");
        return kOk;
    }

    if (sample->parsed()) {
        auto field = load_field(sm_field, sm_primitive);
        SampleSet pts = sample_surface(*field, sm_n, seed);
        write_ply_points(sm_out, pts.points);
        return kOk;
    }

    if (decode_cmd->parsed() || detect_cmd->parsed()) {
        auto original = load_field(v_original, v_primitive);
        LayoutSecret secret = read_layout(v_layout);
        if (!v_original.empty() && !secret.field_fingerprint.empty() &&
            file_fingerprint(v_original) != secret.field_fingerprint)
            log_at(2, "field fingerprint does not match the layout secret");
        std::vector<Vec3> points;
        if (!v_mesh.empty())
            points = read_obj(v_mesh).vertices;
        else if (!v_points.empty())
            points = read_ply_points(v_points);
        else
            throw InvalidArgumentError("--mesh or --points is required");

        DetectionReport report = detect(points, *original, secret.layout,
                                        detect_cmd->parsed() ? v_alpha : 0.001);
        nlohmann::json j = detection_json(report);
        if (decode_cmd->parsed()) {
            DecodeResult result = decode(points, *original, secret.layout);
            j["decoded_message_hex"] = bits_to_hex(result.message);
            j["bit_accuracy"] = result.bit_accuracy;
        } else {
            // detect works blind; the message estimate still goes in the report
            std::vector<std::optional<uint8_t>> bits(secret.layout.message.size());
            j["decoded_message_hex"] = bits_to_hex(bits);
        }
        if (!v_report.empty()) write_json(v_report, j);
        std::cout << j.dump(2) << "\n";
        if (detect_cmd->parsed() && !report.reject_h0) {
            log_at(2, "H0 accepted: no watermark evidence");
            return kVerificationNegative;
        }
        return kOk;
    }

    if (align_cmd->parsed()) {
        GridField wm = read_grid(al_wm);
        TriangleMesh mesh = read_obj(al_mesh);
        AlignmentResult result = align(mesh, wm);
        if (!al_out.empty()) write_obj(al_out, result.aligned);
        nlohmann::json j{
            {"scale", result.transform.scale},
            {"angle", result.transform.angle},
            {"axis", {result.transform.axis.x, result.transform.axis.y, result.transform.axis.z}},
            {"translation",
             {result.transform.translation.x, result.transform.translation.y,
              result.transform.translation.z}},
            {"residual", result.residual},
        };
        if (!al_report.empty()) write_json(al_report, j);
        std::cout << j.dump(2) << "\n";
        return kOk;
    }

    if (attack_cmd->parsed()) {
        TriangleMesh mesh = read_obj(at_mesh);
        write_obj(at_out, apply_attack(mesh, AttackSpec::parse(at_spec), seed));
        return kOk;
    }

    if (metrics_cmd->parsed()) {
        TriangleMesh a = read_obj(me_a);
        TriangleMesh b = read_obj(me_b);
        nlohmann::json j{
            {"chamfer", chamfer(a, b, 30000, seed)},
            {"p2s_a_to_b", p2s(a.vertices, b)},
            {"p2s_b_to_a", p2s(b.vertices, a)},
            {"normal_diff", normal_difference(a, b, 30000, seed)},
        };
        write_json(me_out, j);
        std::cout << j.dump(2) << "\n";
        return kOk;
    }

    if (bench_cmd->parsed()) {
        scenario.seed = seed;
        run_bench(scenario, be_out);
        return kOk;
    }

    return kInvalidInput;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const AlignmentFailedError& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kVerificationNegative;
    } catch (const UndecodableMessageError& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kVerificationNegative;
    } catch (const NonConvergenceError& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const SingularJacobianError& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const EmptySurfaceError& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const SamplingExhaustedError& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const Error& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "funcmark [error] " << e.what() << "\n";
        return kInvalidInput;
    }
}
