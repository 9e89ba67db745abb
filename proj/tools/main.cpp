#include "bosegas/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct CliState {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out = "out";
    std::string run_id;
    int threads = 0;
    std::string profile;
    std::string experiment;
};

void add_common(CLI::App* sub, CliState& state) {
    sub->add_option("--config", state.config_path, "JSON run configuration")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", state.seed, "master seed (beats the config entry)");
    sub->add_option("--out", state.out, "output root directory")->capture_default_str();
    sub->add_option("--run-id", state.run_id, "run directory name (default <command>-s<seed>)");
    sub->add_option("--threads", state.threads, "worker threads (default: config, then 1)");
    sub->add_option("--tolerance-profile", state.profile,
                    "ensemble sizes and solver tolerances")
        ->check(CLI::IsMember({"strict", "desk"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-temperature Bose gas in a Gaussian random potential: closed-form "
                 "predictions, disorder ensembles, low-lying spectra, mean-field ground "
                 "states, and the fragment census."};
    app.require_subcommand(1);

    CliState state;
    add_common(app.add_subcommand("predict", "evaluate the closed-form observables"), state);
    add_common(app.add_subcommand("generate", "synthesize disorder realizations"), state);
    add_common(app.add_subcommand("spectrum", "lowest levels over a disorder ensemble"), state);
    add_common(app.add_subcommand("gpe", "mean-field ground state by descent"), state);
    add_common(app.add_subcommand("fragments", "solve and carve the cloud into fragments"),
               state);
    auto* verify = app.add_subcommand("verify", "self-checking numerical experiments");
    add_common(verify, state);
    verify->add_option("experiment", state.experiment, "correlator | dos_tail | fragmentation")
        ->required();
    add_common(app.add_subcommand("sweep", "scan a parameter axis"), state);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        bosegas::Config config = state.config_path.empty()
                                     ? bosegas::Config()
                                     : bosegas::Config::from_file(state.config_path);
        bosegas::harness::RunOptions options;
        options.out_root = state.out;
        options.run_id = state.run_id;
        options.seed = bosegas::Seed{state.seed, 0};
        options.seed_given = sub->count("--seed") > 0;
        options.threads = state.threads;
        options.tolerance_profile = state.profile;
        return bosegas::harness::dispatch(sub->get_name(), std::move(config), std::move(options),
                                          state.experiment);
    } catch (const bosegas::ValidationError& e) {
        std::cerr << "error (invalid input): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
