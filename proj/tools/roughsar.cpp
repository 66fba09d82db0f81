#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "roughsar/io.hpp"
#include "roughsar/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> noise_seed;
    std::optional<std::string> jstar;
    std::optional<double> delta;
    std::optional<int> threads;
};

nlohmann::json apply_overrides(nlohmann::json j, const Overrides& o)
{
    if (o.seed)
        j["surface"]["seed"] = *o.seed;
    if (o.noise_seed)
        j["noise"]["seed"] = *o.noise_seed;
    if (o.jstar) {
        if (*o.jstar == "auto")
            j["gbr"]["j_star"] = "auto";
        else {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(*o.jstar, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != o.jstar->size())
                throw roughsar::ConfigError("--jstar must be an integer or 'auto'");
            j["gbr"]["j_star"] = v;
        }
    }
    if (o.delta)
        j["imaging"]["delta"] = *o.delta;
    if (o.threads)
        j["solver"]["threads"] = *o.threads;
    return j;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rough-interface GPR SAR simulation, ground-bounce removal and Kirchhoff imaging"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", o.out_dir, "Run directory (default out/<name>)");
    app.add_option("--seed", o.seed, "Surface seed");
    app.add_option("--noise-seed", o.noise_seed, "Noise seed");
    app.add_option("--jstar", o.jstar, "Removed singular modes: integer or 'auto'");
    app.add_option("--delta", o.delta, "Modified-KM parameter in (0, 1]");
    app.add_option("--threads", o.threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

    const std::pair<const char*, const char*> commands[] = {
        {"surface-gen", "Generate the rough surface"},
        {"forward", "Simulate R, S, noise and D"},
        {"gbr", "SVD ground-bounce removal on D"},
        {"image", "KM and modified-KM images of D_tilde"},
        {"peaks", "Peak extraction and sub-region images"},
        {"bistatic", "Monte Carlo bistatic scattering coefficient"},
        {"run", "Full pipeline"},
    };
    for (const auto& [name, help] : commands)
        app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        nlohmann::json j = apply_overrides(roughsar::read_json(o.config_path), o);
        roughsar::ExperimentConfig cfg = roughsar::parse_config(j);
        std::string out = o.out_dir.empty() ? "out/" + cfg.name : o.out_dir;
        roughsar::Pipeline pipeline(std::move(cfg), out);

        nlohmann::json summary =
            cmd == "run" ? pipeline.run() : pipeline.run_stage(cmd == "surface-gen" ? "surface" : cmd);
        std::cout << summary.dump(2) << '\n';
        return kExitOk;
    } catch (const roughsar::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
