#include <cstdio>
#include <functional>

#include <CLI11.hpp>

#include "kbavg/errors.hpp"
#include "kbavg/experiment.hpp"

namespace kbavg {

namespace {

struct SubcommandSpec {
    const char* name;
    const char* help;
    void (*body)(const ExperimentConfig&);
};

constexpr SubcommandSpec kSubcommands[] = {
    {"resonant-part", "Classify every monomial and emit the resonant field",
     &cmd_resonant_part},
    {"average", "Evaluate the averaged field at v0, symbolically and by quadrature",
     &cmd_average},
    {"simulate", "Integrate the configured equation form over the horizon",
     &cmd_simulate},
    {"convergence", "Compare interaction trajectories against the effective one",
     &cmd_convergence},
    {"hamiltonian-drift", "Measure action drift for a non-resonant Hamiltonian system",
     &cmd_hamiltonian_drift},
};

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Averaging toolkit for weakly perturbed linear oscillators"};
    app.require_subcommand(1);

    struct SubState {
        std::string config_path;
        std::string out_dir;
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
        void (*body)(const ExperimentConfig&) = nullptr;
    };
    std::vector<std::shared_ptr<SubState>> states;

    for (const auto& spec : kSubcommands) {
        auto st = std::make_shared<SubState>();
        st->body = spec.body;
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("-c,--config", st->config_path, "JSON config file")
            ->required();
        sub->add_option("-o,--out", st->out_dir, "Output directory (overrides config)");
        sub->add_option("--seed", st->seed, "RNG seed (overrides config)");
        sub->add_option("--threads", st->threads, "Worker threads (overrides config)");
        states.push_back(st);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const SubState* st = nullptr;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (app.get_subcommands().front() == app.get_subcommand(kSubcommands[i].name))
            st = states[i].get();

    try {
        ExperimentConfig cfg = load_config(st->config_path);
        if (!st->out_dir.empty()) cfg.out_dir = st->out_dir;
        if (st->seed) cfg.seed = *st->seed;
        if (st->threads) cfg.threads = *st->threads;
        if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
        st->body(cfg);
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: numeric: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    }
    return 0;
}

} // namespace kbavg
