#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "roughsar/config.hpp"

namespace roughsar {

// Every stage reads its inputs from and writes its outputs to one run directory, so chained
// subcommands and the monolithic run produce identical artifacts.
//
//   surface   -> surface.csv
//   forward   -> R.csv, S.csv, eta.csv, D.csv (+ .json sidecars), forward_report.json
//   gbr       -> spectrum_D.csv, spectrum_R.csv, D_tilde.csv, gbr_report.json
//   image     -> illumination.bin, image_km.{csv,pgm}, image_mkm.{csv,pgm}
//   peaks     -> peaks.json, image_mkm_sub<k>.{csv,pgm}
//   bistatic  -> bistatic.csv, bistatic_report.json
//
// Each stage returns a JSON summary and records itself in run_manifest.json.
class Pipeline {
public:
    Pipeline(ExperimentConfig config, std::filesystem::path out_dir);

    const ExperimentConfig& config() const { return config_; }
    const std::filesystem::path& out_dir() const { return out_; }

    nlohmann::json surface();
    nlohmann::json forward();
    nlohmann::json gbr();
    nlohmann::json image();
    nlohmann::json peaks();
    nlohmann::json bistatic();

    // Imaging chain when the config has targets, bistatic stage when it has a bistatic section.
    nlohmann::json run();

    // Runs a named stage with timing and manifest bookkeeping; failures are recorded as partial.
    nlohmann::json run_stage(const std::string& name);

private:
    std::filesystem::path path(const std::string& file) const { return out_ / file; }
    void record(const std::string& stage, double seconds, const nlohmann::json& summary, const std::string& error);

    ExperimentConfig config_;
    std::filesystem::path out_;
};

std::string version_string();
nlohmann::json library_versions();

}  // namespace roughsar
