// ssdlab command-line front end.
//
// Exit codes: 0 success, 1 usage/config error, 2 reproduce comparison
// failure, 3 violated storage-capacity or state contract.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ssdlab/errors.h"
#include "ssdlab/harness.h"

int main(int argc, char** argv) {
    CLI::App app{"ssdlab: object-store flash utilization and write-amplification lab"};
    app.require_subcommand(1);
    app.fallthrough();  // lets the shared flags below appear after a subcommand
    app.set_version_flag("--version", ssdlab::kToolVersion);

    std::string config_path;
    bool full = false;
    // CLI flags override the config file, which overrides built-in defaults;
    // sentinel values mean "not given on the command line".
    int64_t seed = -1;
    int64_t replicas = -1;
    int64_t workers = -1;
    std::string out_dir;

    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "master seed for all random streams");
    app.add_option("--replicas", replicas, "independent replicas per configuration")
        ->check(CLI::PositiveNumber);
    app.add_flag("--full", full, "full-length protocol (slow; default is quick)");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--workers", workers, "worker threads (0 = hardware concurrency)")
        ->check(CLI::NonNegativeNumber);

    auto* analyze = app.add_subcommand("analyze", "closed-form utilization moments");
    auto* sim_util = app.add_subcommand("sim-util", "Monte-Carlo utilization sweeps");
    auto* sim_wa = app.add_subcommand("sim-wa", "log-structured device write amplification");
    auto* predict_wa = app.add_subcommand("predict-wa", "analytic write-amplification models");
    auto* reproduce =
        app.add_subcommand("reproduce", "rebuild a bundled table or figure and compare");
    std::string target;
    reproduce->add_option("target", target, "table1|table2|table3|table5|fig1|fig2|fig3|fig5")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        ssdlab::HarnessConfig cfg;
        if (!config_path.empty())
            cfg = ssdlab::load_config_file(config_path, cfg);
        if (seed >= 0)
            cfg.master_seed = static_cast<uint64_t>(seed);
        if (replicas >= 0)
            cfg.replicas = static_cast<uint32_t>(replicas);
        if (workers >= 0)
            cfg.workers = static_cast<uint32_t>(workers);
        if (full)
            cfg.full = true;
        if (!out_dir.empty())
            cfg.out_dir = out_dir;

        if (analyze->parsed())
            return ssdlab::cmd_analyze(cfg);
        if (sim_util->parsed())
            return ssdlab::cmd_sim_util(cfg);
        if (sim_wa->parsed())
            return ssdlab::cmd_sim_wa(cfg);
        if (predict_wa->parsed())
            return ssdlab::cmd_predict_wa(cfg);
        if (reproduce->parsed())
            return ssdlab::cmd_reproduce(target, cfg);
        std::fprintf(stderr, "error: no subcommand selected\n");
        return 1;
    } catch (const ssdlab::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ssdlab::ModelError& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return 1;
    } catch (const ssdlab::CapacityError& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return 3;
    } catch (const ssdlab::ContractViolation& e) {
        std::fprintf(stderr, "state contract violated: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
