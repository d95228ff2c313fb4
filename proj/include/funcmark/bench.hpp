#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace funcmark {

// Fully determines a reproducible benchmark run; seed-fixed reruns produce
// byte-identical reports.
struct BenchScenario {
    std::string shape = "sphere";
    int n_s = 32;
    int message_bits = 16;
    double delta = 0.001;
    uint32_t bake_dims = 96;
    std::vector<uint32_t> resolutions = {64, 128, 256};
    std::vector<double> deltas = {0.0005, 0.001, 0.002};
    std::vector<size_t> sample_counts = {10, 50, 100, 1000, 5000};
    // `remesh:0` means "target = mean input edge length".
    std::vector<std::string> attacks = {"gaussian:0.001", "gaussian:0.01", "quantize:16",
                                        "quantize:8",     "smooth:1",      "simplify:0.3",
                                        "remesh:0"};
    double alpha = 0.001;
    int trials = 20;
    uint64_t seed = 0;
};

// Runs the full sweep and writes CSV tables plus report.json into out_dir:
//   accuracy_vs_resolution.csv, detection.csv, accuracy_vs_delta.csv,
//   isosurfacer.csv, attacks.csv, zcurve.csv, report.json
void run_bench(const BenchScenario& scenario, const std::string& out_dir);

}  // namespace funcmark
