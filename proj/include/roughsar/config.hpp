#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "roughsar/bie.hpp"
#include "roughsar/forward.hpp"
#include "roughsar/halfspace.hpp"
#include "roughsar/imaging.hpp"
#include "roughsar/surface.hpp"

namespace roughsar {

struct NoiseConfig {
    double snr_db = 24.2;
    std::uint64_t seed = 1;
};

struct ImagingConfig {
    Window window{-0.15, 0.15, -0.20, -0.02};
    double spacing = 0.0025;
    double delta = 0.01;
    int n_peaks = 1;
    double min_separation = 0.05;
    double subregion_half_width = 0.025;
};

struct BistaticConfig {
    double freq_hz = 4.1e9;
    double theta_i_deg = 30.0;
    int n_realizations = 100;
    double theta_s_min_deg = -90.0;
    double theta_s_max_deg = 90.0;
    double theta_s_step_deg = 0.25;
    double taper_g = 0.0;
};

struct ExperimentConfig {
    std::string name;
    SurfaceSpec surface;
    Acquisition acquisition;
    std::vector<PointTarget> targets;
    NoiseConfig noise;
    std::optional<int> j_star;  // empty selects automatic knee detection
    ImagingConfig imaging;
    ContourSpec contour;
    BieOptions bie;
    BistaticConfig bistatic;
    int threads = 0;
    std::vector<std::string> notes;
    nlohmann::json source;

    GridAxes grid() const;
    BistaticSpec bistatic_spec() const;
};

// Parse and fully validate; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

std::string config_hash(const ExperimentConfig& cfg);

}  // namespace roughsar
