#include "roughsar/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <Eigen/Core>
#include <fftw3.h>
#include <openssl/crypto.h>
#include <omp.h>

#include "roughsar/gbr.hpp"
#include "roughsar/io.hpp"

extern "C" {
char* openblas_get_config(void);
void openblas_set_num_threads(int);
}

namespace roughsar {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "run_manifest.json";

std::string file_sha256(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

json targets_json(const std::vector<PointTarget>& targets)
{
    json out = json::array();
    for (const auto& t : targets)
        out.push_back({{"x_m", t.pos.x}, {"z_m", t.pos.z}, {"rho_re", t.rho.real()}, {"rho_im", t.rho.imag()}});
    return out;
}

json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

void require(const fs::path& p, const std::string& producer)
{
    if (!fs::exists(p))
        throw ConfigError(p.filename().string() + " not found in " + p.parent_path().string() + "; run '" + producer +
                          "' first");
}

json knee_json(const KneeResult& k)
{
    return {{"j_star", k.j_star},
            {"corner", k.corner},
            {"gap_decades", k.gap},
            {"cliff_share", k.cliff_share},
            {"decay_decades", k.decay_decades},
            {"trace", k.trace}};
}

void write_bistatic_csv(const fs::path& p, const BistaticResult& r)
{
    std::ofstream out(p);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    out << std::setprecision(17) << "theta_s_deg,sigma_mean\n";
    for (std::size_t i = 0; i < r.theta_s_deg.size(); ++i)
        out << r.theta_s_deg[i] << ',' << r.sigma_mean[i] << '\n';
}

Window clip_window(const GridAxes& g, double xc, double zc, double hw)
{
    return {std::max(xc - hw, g.x.front()), std::min(xc + hw, g.x.back()), std::max(zc - hw, g.z.front()),
            std::min(zc + hw, g.z.back())};
}

}  // namespace

std::string version_string()
{
    return "0.1.0";
}

json library_versions()
{
    std::ostringstream eigen;
    eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
    return {{"roughsar", version_string()},
            {"eigen", eigen.str()},
            {"fftw", std::string(fftw_version)},
            {"openblas", std::string(openblas_get_config())},
            {"openssl", std::string(OpenSSL_version(OPENSSL_VERSION))},
            {"compiler", std::string(__VERSION__)},
            {"cxx_standard", static_cast<long>(__cplusplus)}};
}

Pipeline::Pipeline(ExperimentConfig config, fs::path out_dir) : config_(std::move(config)), out_(std::move(out_dir))
{
    fs::create_directories(out_);
    if (config_.threads > 0) {
        omp_set_num_threads(config_.threads);
        openblas_set_num_threads(config_.threads);
    }
}

json Pipeline::surface()
{
    RoughSurface s = generate_surface(config_.surface);
    write_surface_csv(path("surface.csv"), s);
    SurfaceStats st = surface_stats({s});
    return {{"n_points", s.size()},
            {"seed", config_.surface.seed},
            {"rms_m", finite_or_null(st.rms)},
            {"corr_len_est_m", finite_or_null(st.corr_len_est)}};
}

json Pipeline::forward()
{
    require(path("surface.csv"), "surface-gen");
    RoughSurface s = read_surface_csv(path("surface.csv"));
    if (s.size() != config_.surface.n_points || std::abs(s.domain_len - config_.surface.domain_len) > 1e-12)
        throw ConfigError("surface.csv does not match the configured surface");

    const Acquisition& acq = config_.acquisition;
    ForwardOptions opt;
    opt.bie = config_.bie;
    opt.on_frequency = [&](int m, double rcond) {
        std::cerr << "[forward] frequency " << (m + 1) << '/' << acq.n_freqs() << " rcond " << rcond << '\n';
    };
    ForwardResult fr = simulate(s, acq, config_.targets, opt);
    NoisyData nd = add_noise(fr.R, fr.S, config_.noise.snr_db, config_.noise.seed);

    json extra = {{"surface_seed", config_.surface.seed},
                  {"noise_seed", config_.noise.seed},
                  {"snr_db", finite_or_null(config_.noise.snr_db)},
                  {"targets", targets_json(config_.targets)}};
    write_data_matrix(path("R.csv"), fr.R, acq, extra);
    write_data_matrix(path("S.csv"), fr.S, acq, extra);
    write_data_matrix(path("eta.csv"), nd.eta, acq, extra);
    write_data_matrix(path("D.csv"), nd.D, acq, extra);

    const double norm_r = fr.R.values.norm(), norm_s = fr.S.values.norm();
    json report = {{"schema_version", kSchemaVersion},
                   {"snr_db_nominal", finite_or_null(config_.noise.snr_db)},
                   {"snr_db_realized", finite_or_null(nd.snr_db)},
                   {"esnr_db", finite_or_null(nd.esnr_db)},
                   {"esnr_ratio_db", finite_or_null(nd.esnr_ratio_db)},
                   {"norm_R", norm_r},
                   {"norm_S", norm_s},
                   {"norm_eta", nd.eta.values.norm()},
                   {"rcond", fr.rcond}};
    write_json(path("forward_report.json"), report);
    return {{"esnr_db", report["esnr_db"]}, {"snr_db_realized", report["snr_db_realized"]}, {"S_over_R", norm_s / norm_r}};
}

json Pipeline::gbr()
{
    require(path("D.csv"), "forward");
    DataMatrixFile d = read_data_matrix(path("D.csv"));
    SvdSpectrum sp = svd_spectrum(d.data.values);
    write_spectrum_csv(path("spectrum_D.csv"), sp.sigma);

    json report = {{"schema_version", kSchemaVersion}};
    int j_star = 0;
    if (config_.j_star) {
        j_star = *config_.j_star;
        report["j_star_source"] = "config";
        try {
            report["knee_D"] = knee_json(detect_knee(sp));
        } catch (const NumericalError& e) {
            report["knee_D"] = {{"error", e.what()}};
        }
    } else {
        KneeResult k = detect_knee(sp);
        j_star = k.j_star;
        report["j_star_source"] = "auto";
        report["knee_D"] = knee_json(k);
    }
    report["j_star"] = j_star;
    CMatrix dt = remove_ground_bounce(sp, d.data.values, j_star);
    json extra = d.meta;
    for (const char* k : {"schema_version", "role", "rows", "cols", "acquisition"})
        extra.erase(k);
    extra["j_star"] = j_star;
    write_data_matrix(path("D_tilde.csv"), {dt, Role::DTilde}, d.acquisition, extra);

    if (fs::exists(path("R.csv"))) {
        SvdSpectrum sr = svd_spectrum(read_data_matrix(path("R.csv")).data.values);
        write_spectrum_csv(path("spectrum_R.csv"), sr.sigma);
        try {
            report["knee_R"] = knee_json(detect_knee(sr));
        } catch (const NumericalError& e) {
            report["knee_R"] = {{"error", e.what()}};
        }
        if (sr.sigma.size() >= 5 && sr.sigma(0) > 0.0)
            report["R_sigma5_over_sigma1"] = sr.sigma(4) / sr.sigma(0);
    }
    std::vector<double> rel;
    for (Eigen::Index i = 0; i < sp.sigma.size(); ++i)
        rel.push_back(sp.sigma(0) > 0.0 ? sp.sigma(i) / sp.sigma(0) : 0.0);
    report["D_sigma_rel"] = rel;
    write_json(path("gbr_report.json"), report);
    return {{"j_star", j_star}, {"j_star_source", report["j_star_source"]}};
}

json Pipeline::image()
{
    require(path("D_tilde.csv"), "gbr");
    DataMatrixFile d = read_data_matrix(path("D_tilde.csv"));
    const Acquisition& acq = d.acquisition;
    GridAxes grid = config_.grid();
    const std::string fp = acquisition_fingerprint(acq.freqs_hz, acq.positions, grid, acq.medium.eps_r);

    IlluminationCache cache;
    bool reused = false;
    if (fs::exists(path("illumination.bin"))) {
        try {
            cache = IlluminationCache::load(path("illumination.bin"));
            reused = cache.acquisition_hash() == fp;
        } catch (const std::exception&) {
            reused = false;
        }
    }
    if (!reused) {
        cache = IlluminationCache::build(acq.freqs_hz, acq.positions, grid, acq.medium.eps_r, config_.contour,
                                         acq.medium.c);
        cache.save(path("illumination.bin"));
    }

    ImageGrid km = km_image(d.data.values, cache);
    write_image_csv(path("image_km.csv"), km);
    write_image_pgm(path("image_km.pgm"), km);
    ImageGrid mkm = modified_km(km, config_.imaging.delta);
    write_image_csv(path("image_mkm.csv"), mkm);
    write_image_pgm(path("image_mkm.pgm"), mkm);
    return {{"grid_nx", grid.nx()}, {"grid_nz", grid.nz()}, {"illumination_cache_reused", reused},
            {"delta", config_.imaging.delta}};
}

json Pipeline::peaks()
{
    require(path("image_km.csv"), "image");
    ImageGrid km = read_image_csv(path("image_km.csv"));
    const ImagingConfig& ic = config_.imaging;
    std::vector<Peak> found = find_peaks(km, ic.n_peaks, ic.min_separation);

    json list = json::array();
    for (std::size_t k = 0; k < found.size(); ++k) {
        const Peak& p = found[k];
        json entry = {{"x_m", p.x}, {"z_m", p.z}, {"value", p.value}, {"ix", p.ix}, {"iz", p.iz}};
        if (!config_.targets.empty()) {
            std::size_t best = 0;
            double best_d = INFINITY;
            for (std::size_t t = 0; t < config_.targets.size(); ++t) {
                double dd = std::hypot(p.x - config_.targets[t].pos.x, p.z - config_.targets[t].pos.z);
                if (dd < best_d) {
                    best_d = dd;
                    best = t;
                }
            }
            entry["nearest_target"] = best;
            entry["error_m"] = best_d;
        }
        Window w = clip_window(km.axes, p.x, p.z, ic.subregion_half_width);
        ImageGrid sub = modified_km(km, ic.delta, w);
        const std::string stem = "image_mkm_sub" + std::to_string(k + 1);
        write_image_csv(path(stem + ".csv"), sub);
        write_image_pgm(path(stem + ".pgm"), sub);
        Eigen::Index r, c;
        double vmax = sub.values.maxCoeff(&r, &c);
        entry["subregion"] = {{"x_min_m", w.x_min}, {"x_max_m", w.x_max}, {"z_min_m", w.z_min}, {"z_max_m", w.z_max},
                              {"max_value", vmax},   {"argmax_x_m", sub.axes.x[c]}, {"argmax_z_m", sub.axes.z[r]}};
        list.push_back(entry);
    }
    json report = {{"schema_version", kSchemaVersion},
                   {"delta", ic.delta},
                   {"min_separation_m", ic.min_separation},
                   {"targets", targets_json(config_.targets)},
                   {"peaks", list}};
    write_json(path("peaks.json"), report);
    return {{"n_peaks", found.size()}, {"first", list.front()}};
}

json Pipeline::bistatic()
{
    BistaticResult r = bistatic_xs(config_.bistatic_spec());
    write_bistatic_csv(path("bistatic.csv"), r);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < r.sigma_mean.size(); ++i)
        if (r.sigma_mean[i] > r.sigma_mean[arg])
            arg = i;
    double mean_refl = 0.0;
    for (double f : r.reflected_fraction)
        mean_refl += f / r.reflected_fraction.size();
    json report = {{"schema_version", kSchemaVersion},
                   {"theta_i_deg", config_.bistatic.theta_i_deg},
                   {"n_realizations", config_.bistatic.n_realizations},
                   {"first_seed", config_.surface.seed},
                   {"argmax_theta_s_deg", r.theta_s_deg[arg]},
                   {"mean_reflected_fraction", mean_refl}};
    write_json(path("bistatic_report.json"), report);
    return {{"argmax_theta_s_deg", r.theta_s_deg[arg]}};
}

json Pipeline::run_stage(const std::string& name)
{
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    json summary;
    try {
        if (name == "surface")
            summary = surface();
        else if (name == "forward")
            summary = forward();
        else if (name == "gbr")
            summary = gbr();
        else if (name == "image")
            summary = image();
        else if (name == "peaks")
            summary = peaks();
        else if (name == "bistatic")
            summary = bistatic();
        else
            throw ConfigError("unknown stage '" + name + "'");
    } catch (const ConfigError& e) {
        record(name, elapsed(), json(), e.what());
        throw ConfigError("[" + name + "] " + e.what());
    } catch (const std::exception& e) {
        record(name, elapsed(), json(), e.what());
        throw NumericalError("[" + name + "] " + e.what());
    }
    record(name, elapsed(), summary, "");
    return summary;
}

json Pipeline::run()
{
    json out = json::object();
    std::vector<std::string> stages;
    if (!config_.targets.empty())
        stages = {"surface", "forward", "gbr", "image", "peaks"};
    if (config_.source.contains("bistatic"))
        stages.push_back("bistatic");
    if (stages.empty())
        throw ConfigError("config has neither targets nor a bistatic section; nothing to run");
    for (const auto& s : stages)
        out[s] = run_stage(s);
    return out;
}

void Pipeline::record(const std::string& stage, double seconds, const json& summary, const std::string& error)
{
    json m;
    if (fs::exists(path(kManifest))) {
        try {
            m = read_json(path(kManifest));
            check_schema_version(m, kManifest);
            if (m.value("config_sha256", "") != config_hash(config_))
                m = json();
        } catch (const std::exception&) {
            m = json();
        }
    }
    if (m.is_null()) {
        m = {{"schema_version", kSchemaVersion},
             {"name", config_.name},
             {"config_sha256", config_hash(config_)},
             {"config", config_.source},
             {"stages", json::object()}};
    }
    m["seeds"] = {{"surface", config_.surface.seed}, {"noise", config_.noise.seed}};
    m["versions"] = library_versions();
    m["notes"] = config_.notes;

    json entry = {{"seconds", seconds}, {"status", error.empty() ? "ok" : "failed"}};
    if (!error.empty())
        entry["error"] = error;
    else
        entry["summary"] = summary;
    m["stages"][stage] = entry;

    bool failed = false;
    for (auto& [k, v] : m["stages"].items())
        failed = failed || v.value("status", "") == "failed";
    m["status"] = failed ? "partial" : "ok";
    m["partial"] = failed;

    json artifacts = json::object();
    for (const auto& e : fs::directory_iterator(out_)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && e.path().filename() != kManifest && (ext == ".csv" || ext == ".json" || ext == ".pgm"))
            artifacts[e.path().filename().string()] = file_sha256(e.path());
    }
    m["artifacts_sha256"] = artifacts;
    write_json(path(kManifest), m);
}

}  // namespace roughsar
