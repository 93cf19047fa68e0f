// msqg-forge: CLI driver for the prescribed-energy iteration pipeline.
// Subcommands: run (full pipeline + reports), verify (invariant suite).

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "pipeline.hpp"

namespace {

void bind_run_options(CLI::App* cmd, msqg::RunConfig& cfg) {
    cmd->add_option("--mode", cfg.mode, "additive | multiplicative")
        ->check(CLI::IsMember({"additive", "multiplicative"}));
    cmd->add_option("--stages", cfg.stages,
                    "number of constructed iterates y_0..y_{K-1}");
    cmd->add_option("--grid", cfg.grid_n, "grid points per axis");
    cmd->add_option("--seed", cfg.seed, "noise seed");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--workers", cfg.workers, "worker pool size (0 = auto)");
    cmd->add_option("--paths", cfg.paths, "Monte-Carlo path count");
    cmd->add_flag("--strict", cfg.strict,
                  "fail (exit 3) on hard invariant violations");

    cmd->add_option("--a", cfg.a, "frequency base a");
    cmd->add_option("--b", cfg.b, "exponent base b");
    cmd->add_option("--beta", cfg.beta);
    cmd->add_option("--alpha", cfg.alpha);
    cmd->add_option("--gamma", cfg.gamma, "dissipation exponent");
    cmd->add_option("--sigma", cfg.sigma);
    cmd->add_option("--L", cfg.horizon_L, "multiplicative horizon L");
    cmd->add_option("--dt", cfg.dt, "noise/time sample spacing");
    cmd->add_option("--noise-amplitude", cfg.noise_amplitude);
    cmd->add_option("--noise-mode-radius", cfg.noise_mode_radius);
    cmd->add_option("--holder-delta", cfg.holder_delta);
    cmd->add_option("--mc-horizon", cfg.mc_horizon);
    cmd->add_option("--energy-kind", cfg.energy_kind)
        ->check(CLI::IsMember({"affine", "exponential"}));
    cmd->add_option("--energy-d0", cfg.energy_d0);
    cmd->add_option("--energy-d1", cfg.energy_d1);
    cmd->add_option("--samples-per-slice", cfg.samples_per_slice);
    cmd->add_option("--flow-samples", cfg.flow_samples_per_slice);
    cmd->add_option("--kernel-taps", cfg.kernel_taps);
    cmd->add_option("--stress-stride", cfg.stress_stride);
    cmd->add_option("--dt-stride", cfg.dt_stride);
    cmd->add_option("--sup-stride", cfg.sup_stride);
    cmd->add_option("--tol-partition", cfg.tol_partition);
    cmd->add_option("--tol-divergence", cfg.tol_divergence);
    cmd->add_option("--tol-quadrature", cfg.tol_quadrature);
    cmd->add_option("--tol-reality", cfg.tol_reality);
    cmd->add_option("--probe-count", cfg.probe_count);
    cmd->add_option("--projector-probes", cfg.projector_probes);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral prescribed-energy iteration for the "
                 "momentum SQG equations under noise"};
    app.require_subcommand(0, 1);

    msqg::RunConfig cfg;
    auto* run_cmd = app.add_subcommand("run", "execute the full pipeline");
    run_cmd->set_config("--config", "", "configuration file (key = value)");
    run_cmd->allow_config_extras(false);
    bind_run_options(run_cmd, cfg);

    auto* verify_cmd =
        app.add_subcommand("verify", "run the invariant suite only");
    int verify_grid = 64;
    std::uint64_t verify_seed = 1;
    bool verify_list = false;
    verify_cmd->add_option("--grid", verify_grid, "grid points per axis");
    verify_cmd->add_option("--seed", verify_seed);
    verify_cmd->add_flag("--list", verify_list,
                         "print the invariant catalogue and exit");

    // top-level --verify mirrors the subcommand
    bool top_verify = false;
    app.add_flag("--verify", top_verify, "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (verify_cmd->parsed() || top_verify) {
            if (verify_list) {
                std::cout << msqg::verify_catalogue().dump(2) << '\n';
                return 0;
            }
            const msqg::VerifyResult res =
                msqg::run_verify(verify_grid, verify_seed);
            for (const auto& c : res.checks)
                std::printf("%-32s %s  (%.3e)\n",
                            c["id"].get<std::string>().c_str(),
                            c["pass"].get<bool>() ? "pass" : "FAIL",
                            c["value"].get<double>());
            return res.exit_code;
        }
        if (run_cmd->parsed()) {
            cfg.workers = msqg::resolve_workers(cfg.workers);
            const msqg::RunArtifacts art = msqg::run_pipeline(cfg);
            std::cout << "report: " << cfg.out_dir << "/report.json\n";
            if (art.report.contains("noise"))
                std::cout << "stopping time: "
                          << art.report["noise"]["stopping_time"].dump()
                          << '\n';
            return art.exit_code;
        }
        std::cout << app.help() << '\n';
        return 0;
    } catch (const msqg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const msqg::BandExceedsGrid& e) {
        std::cerr << "grid too small: " << e.what() << '\n';
        return 2;
    } catch (const msqg::NonPositiveBase& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const msqg::ZeroStages& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const msqg::NumericalFault& e) {
        std::cerr << "numerical fault: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
