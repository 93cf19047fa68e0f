#pragma once

#include <json.hpp>

#include "iterate.hpp"
#include "noise.hpp"
#include "stress.hpp"

namespace msqg {

struct RunConfig {
    std::string mode = "additive";
    long long a = 5, b = 2;
    double beta = 0.51, alpha = 1.25, gamma = 1.0, sigma = 0.1;
    int stages = 2;  // constructed iterates y_0 .. y_{stages-1}
    double horizon_L = 4.0;
    int grid_n = 128;
    double dt = 1.0 / 1024.0;
    std::uint64_t seed = 7;
    unsigned workers = 1;
    int paths = 1;
    double mc_horizon = 2.0;  // T in the P(T_L >= T) estimate
    bool strict = false;
    std::string out_dir = "out";

    double noise_amplitude = 1.0;
    double noise_mode_radius = 0.0;  // 0 = min(dealias, 42)
    double holder_delta = 0.05;

    std::string energy_kind = "affine";  // affine | exponential
    double energy_d0 = 80.0, energy_d1 = 1.0;

    int samples_per_slice = 8;
    int flow_samples_per_slice = 4;
    int kernel_taps = 4;
    int stress_stride = 16;
    int dt_stride = 32;
    int sup_stride = 4;  // stride for the physical-space sup-norm rows

    // strict-mode tolerances
    double tol_partition = 1e-12;
    double tol_divergence = 1e-10;
    double tol_quadrature = 0.1;
    double tol_reality = 1e-12;

    // constant-measurement knobs (internal seeds keep reports seed-stable)
    int probe_count = 200;
    int projector_probes = 1000;

    NoiseMode noise_mode() const;
    void validate() const;  // throws ConfigError
};

struct RunArtifacts {
    int exit_code = 0;
    nlohmann::json report;
    std::string energy_trace_csv;
    std::string stress_norms_csv;
};

/// Full pipeline: constants -> noise -> base step -> iterations -> reports.
/// Writes report.json, energy_trace.csv, stress_norms.csv and checkpoints
/// under out_dir when write_outputs is set.
RunArtifacts run_pipeline(const RunConfig& cfg, bool write_outputs = true);

/// Invariant suite (operator identities, geometry, partition, OU variance,
/// flow oracles) without a production run. Returns exit code 0/2/3 and the
/// catalogue of executed checks.
struct VerifyResult {
    int exit_code = 0;
    nlohmann::json checks;
};
VerifyResult run_verify(int grid_n, std::uint64_t seed);

/// The catalogue of verify checks (ids + descriptions), for --list.
nlohmann::json verify_catalogue();

}  // namespace msqg
