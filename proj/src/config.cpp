#include "roughsar/config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "roughsar/io.hpp"

namespace roughsar {

namespace {

using nlohmann::json;

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys)
{
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, std::optional<T> fallback = std::nullopt)
{
    if (!obj.contains(key)) {
        if (fallback)
            return *fallback;
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": key '" + key + "' has the wrong type");
    }
}

double parse_snr(const json& v)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string() && (v == "inf" || v == "Infinity"))
        return std::numeric_limits<double>::infinity();
    throw ConfigError("noise: snr_db must be a number or \"inf\"");
}

}  // namespace

GridAxes ExperimentConfig::grid() const
{
    const Window& w = imaging.window;
    return GridAxes::uniform(w.x_min, w.x_max, w.z_min, w.z_max, imaging.spacing);
}

BistaticSpec ExperimentConfig::bistatic_spec() const
{
    BistaticSpec b;
    b.surface = surface;
    b.medium = acquisition.medium;
    b.freq_hz = bistatic.freq_hz;
    b.theta_i_deg = bistatic.theta_i_deg;
    b.n_realizations = bistatic.n_realizations;
    b.taper_g = bistatic.taper_g;
    b.diagonal = bie.diagonal;
    const double span = bistatic.theta_s_max_deg - bistatic.theta_s_min_deg;
    const int n = static_cast<int>(std::round(span / bistatic.theta_s_step_deg)) + 1;
    b.theta_s_deg = linspace(bistatic.theta_s_min_deg, bistatic.theta_s_max_deg, n);
    return b;
}

ExperimentConfig parse_config(const json& j)
{
    allow_keys(j, "config", {"schema_version", "name", "surface", "acquisition", "medium", "targets", "noise", "gbr",
                             "imaging", "contour", "solver", "bistatic", "notes"});
    check_schema_version(j, "config");
    ExperimentConfig c;
    c.source = j;
    c.name = get<std::string>(j, "name", "config");

    if (!j.contains("surface") || !j.contains("medium"))
        throw ConfigError("config: sections 'surface' and 'medium' are required");
    const json& s = j.at("surface");
    allow_keys(s, "surface", {"h_rms_m", "corr_len_m", "domain_len_m", "n_points", "seed"});
    c.surface.h_rms = get<double>(s, "h_rms_m", "surface");
    c.surface.corr_len = get<double>(s, "corr_len_m", "surface");
    c.surface.domain_len = get<double>(s, "domain_len_m", "surface");
    c.surface.n_points = get<int>(s, "n_points", "surface");
    c.surface.seed = get<std::uint64_t>(s, "seed", "surface");
    validate(c.surface);

    if (!j.contains("medium"))
        throw ConfigError("config: missing 'medium'");
    const json& md = j.at("medium");
    allow_keys(md, "medium", {"eps_r", "beta"});
    Medium medium;
    medium.eps_r = get<double>(md, "eps_r", "medium");
    medium.beta = get<double>(md, "beta", "medium");
    validate(medium);

    const json a = j.value("acquisition", json::object());
    allow_keys(a, "acquisition",
               {"freq_min_ghz", "freq_max_ghz", "n_freqs", "n_positions", "aperture_m", "altitude_m"});
    c.acquisition = Acquisition::uniform(get<double>(a, "freq_min_ghz", "acquisition", 3.1) * 1e9,
                                         get<double>(a, "freq_max_ghz", "acquisition", 5.1) * 1e9,
                                         get<int>(a, "n_freqs", "acquisition", 25),
                                         get<int>(a, "n_positions", "acquisition", 21),
                                         get<double>(a, "aperture_m", "acquisition", 1.0),
                                         get<double>(a, "altitude_m", "acquisition", 1.0), medium);
    if (!(c.acquisition.altitude > 0.0))
        throw ConfigError("acquisition: altitude must be positive");

    if (j.contains("targets")) {
        if (!j.at("targets").is_array())
            throw ConfigError("targets: expected an array");
        for (const auto& t : j.at("targets")) {
            allow_keys(t, "target", {"x_m", "z_m", "rho_re", "rho_im"});
            PointTarget pt{{get<double>(t, "x_m", "target"), get<double>(t, "z_m", "target")},
                           cdouble(get<double>(t, "rho_re", "target", 0.0), get<double>(t, "rho_im", "target", 0.0))};
            if (!(pt.pos.z < 0.0))
                throw ConfigError("target: must lie below the mean interface");
            if (pt.rho == 0.0)
                throw ConfigError("target: reflectivity must be non-zero");
            c.targets.push_back(pt);
        }
    }

    if (j.contains("noise")) {
        const json& n = j.at("noise");
        allow_keys(n, "noise", {"snr_db", "seed"});
        if (n.contains("snr_db"))
            c.noise.snr_db = parse_snr(n.at("snr_db"));
        c.noise.seed = get<std::uint64_t>(n, "seed", "noise", c.noise.seed);
    }

    if (j.contains("gbr")) {
        const json& g = j.at("gbr");
        allow_keys(g, "gbr", {"j_star"});
        if (g.contains("j_star")) {
            const json& v = g.at("j_star");
            if (v.is_string() && v == "auto")
                c.j_star.reset();
            else if (v.is_number_integer() && v.get<int>() >= 1)
                c.j_star = v.get<int>();
            else
                throw ConfigError("gbr: j_star must be a positive integer or \"auto\"");
        }
    }

    if (j.contains("imaging")) {
        const json& im = j.at("imaging");
        allow_keys(im, "imaging", {"x_min_m", "x_max_m", "z_min_m", "z_max_m", "spacing_m", "delta", "n_peaks",
                                   "min_separation_m", "subregion_half_width_m"});
        ImagingConfig& ic = c.imaging;
        ic.window.x_min = get<double>(im, "x_min_m", "imaging", ic.window.x_min);
        ic.window.x_max = get<double>(im, "x_max_m", "imaging", ic.window.x_max);
        ic.window.z_min = get<double>(im, "z_min_m", "imaging", ic.window.z_min);
        ic.window.z_max = get<double>(im, "z_max_m", "imaging", ic.window.z_max);
        ic.spacing = get<double>(im, "spacing_m", "imaging", ic.spacing);
        ic.delta = get<double>(im, "delta", "imaging", ic.delta);
        ic.n_peaks = get<int>(im, "n_peaks", "imaging", ic.n_peaks);
        ic.min_separation = get<double>(im, "min_separation_m", "imaging", ic.min_separation);
        ic.subregion_half_width = get<double>(im, "subregion_half_width_m", "imaging", ic.subregion_half_width);
    }
    if (!(c.imaging.window.z_max < 0.0))
        throw ConfigError("imaging: window must lie strictly below the interface");
    if (!(c.imaging.delta > 0.0 && c.imaging.delta <= 1.0))
        throw ConfigError("imaging: delta must lie in (0, 1]");
    if (c.imaging.n_peaks < 1)
        throw ConfigError("imaging: n_peaks must be >= 1");
    c.grid();

    if (j.contains("contour")) {
        const json& ct = j.at("contour");
        allow_keys(ct, "contour", {"A", "w", "n_quad"});
        c.contour.A = get<double>(ct, "A", "contour", c.contour.A);
        c.contour.w = get<double>(ct, "w", "contour", c.contour.w);
        c.contour.n_quad = get<int>(ct, "n_quad", "contour", c.contour.n_quad);
    }
    validate(c.contour);

    if (j.contains("solver")) {
        const json& sv = j.at("solver");
        allow_keys(sv, "solver", {"diagonal_rule", "threads"});
        std::string rule = get<std::string>(sv, "diagonal_rule", "solver", std::string("log_corrected"));
        if (rule == "log_corrected")
            c.bie.diagonal = DiagonalRule::LogCorrected;
        else if (rule == "cell_average")
            c.bie.diagonal = DiagonalRule::CellAverage;
        else
            throw ConfigError("solver: diagonal_rule must be log_corrected or cell_average");
        c.threads = get<int>(sv, "threads", "solver", 0);
        if (c.threads < 0)
            throw ConfigError("solver: threads must be >= 0");
    }

    if (j.contains("bistatic")) {
        const json& b = j.at("bistatic");
        allow_keys(b, "bistatic", {"freq_ghz", "theta_i_deg", "n_realizations", "theta_s_min_deg", "theta_s_max_deg",
                                   "theta_s_step_deg", "taper_width_m"});
        BistaticConfig& bc = c.bistatic;
        bc.freq_hz = get<double>(b, "freq_ghz", "bistatic", bc.freq_hz / 1e9) * 1e9;
        bc.theta_i_deg = get<double>(b, "theta_i_deg", "bistatic", bc.theta_i_deg);
        bc.n_realizations = get<int>(b, "n_realizations", "bistatic", bc.n_realizations);
        bc.theta_s_min_deg = get<double>(b, "theta_s_min_deg", "bistatic", bc.theta_s_min_deg);
        bc.theta_s_max_deg = get<double>(b, "theta_s_max_deg", "bistatic", bc.theta_s_max_deg);
        bc.theta_s_step_deg = get<double>(b, "theta_s_step_deg", "bistatic", bc.theta_s_step_deg);
        bc.taper_g = get<double>(b, "taper_width_m", "bistatic", bc.taper_g);
        if (bc.n_realizations < 1 || !(bc.theta_s_step_deg > 0.0) || !(bc.theta_s_max_deg > bc.theta_s_min_deg) ||
            bc.theta_s_min_deg < -90.0 || bc.theta_s_max_deg > 90.0 || !(std::abs(bc.theta_i_deg) < 90.0))
            throw ConfigError("bistatic: invalid angles or realization count");
    }

    if (j.contains("notes"))
        c.notes = get<std::vector<std::string>>(j, "notes", "config");
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    return parse_config(read_json(path));
}

std::string config_hash(const ExperimentConfig& cfg)
{
    return sha256_hex(cfg.source.dump());
}

}  // namespace roughsar
