// Acceptance driver: one PASS/FAIL line per criterion.
//
//   acceptance --profile ci   : criteria 1, 2, 4 (reduced discretization), 9 and the CI runtime budget
//   acceptance --profile full : every criterion on the shipped fixtures
//
// Criteria listed with --known-fail are still evaluated and printed as FAIL; they only stop counting
// against the exit status. A listed criterion that passes is reported as such.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"

#include "roughsar/bie.hpp"
#include "roughsar/config.hpp"
#include "roughsar/forward.hpp"
#include "roughsar/gbr.hpp"
#include "roughsar/halfspace.hpp"
#include "roughsar/imaging.hpp"
#include "roughsar/io.hpp"
#include "roughsar/pipeline.hpp"

#include "oracles.hpp"

using namespace roughsar;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = ROUGHSAR_CONFIG_DIR;

class Clock {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string num(double v, int digits = 3)
{
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

std::string cm(double metres)
{
    return num(100.0 * metres, 3) + " cm";
}

double rel(cdouble a, cdouble b)
{
    return std::abs(a - b) / std::abs(b);
}

// Lines go to stdout and to <out>/acceptance_report.txt.
class Report {
public:
    Report(std::set<std::string> known, const fs::path& file) : known_(std::move(known)), file_(file) {}

    void line(const std::string& text)
    {
        std::cout << text << std::endl;
        file_ << text << std::endl;
    }

    bool add(const std::string& id, bool pass, const std::string& text)
    {
        const bool listed = known_.count(id) > 0;
        std::ostringstream os;
        os << (pass ? "PASS  " : "FAIL  ") << std::left << std::setw(5) << id << text;
        if (!pass && listed)
            os << "  [known deviation]";
        if (pass && listed)
            os << "  [listed as known deviation, passed]";
        line(os.str());
        if (pass)
            ++passed_;
        else if (listed)
            ++known_failed_;
        else
            unexpected_.push_back(id);
        return pass;
    }

    void skip(const std::string& id, const std::string& text)
    {
        std::ostringstream os;
        os << "SKIP  " << std::left << std::setw(5) << id << text;
        line(os.str());
    }

    void info(const std::string& text) { line("INFO  " + text); }

    int finish()
    {
        std::string s = "summary: " + std::to_string(passed_) + " passed, " + std::to_string(known_failed_) +
                        " failed (known), " + std::to_string(unexpected_.size()) + " failed (unexpected)";
        for (const auto& id : unexpected_)
            s += ' ' + id;
        line(s);
        return unexpected_.empty() ? 0 : 1;
    }

private:
    std::set<std::string> known_;
    std::ofstream file_;
    int passed_ = 0, known_failed_ = 0;
    std::vector<std::string> unexpected_;
};

json fixture_json(const std::string& name)
{
    return read_json(kConfigDir + "/" + name + ".json");
}

ExperimentConfig fixture(const std::string& name)
{
    return parse_config(fixture_json(name));
}

// Imaging result of one noisy realization.
struct Reconstruction {
    NoisyData noisy;
    int j_star = 0;
    ImageGrid km;
    std::vector<Peak> peaks;
};

Reconstruction reconstruct(const CMatrix& R, const CMatrix& S, const ExperimentConfig& cfg, std::uint64_t noise_seed,
                           double snr_db, const IlluminationCache& cache)
{
    Reconstruction r;
    r.noisy = add_noise({R, Role::R}, {S, Role::S}, snr_db, noise_seed);
    SvdSpectrum sp = svd_spectrum(r.noisy.D.values);
    r.j_star = cfg.j_star ? *cfg.j_star : detect_knee(sp).j_star;
    r.km = km_image(remove_ground_bounce(sp, r.noisy.D.values, r.j_star), cache);
    r.peaks = find_peaks(r.km, cfg.imaging.n_peaks, cfg.imaging.min_separation);
    return r;
}

double distance(const Peak& p, const Point& t)
{
    return std::hypot(p.x - t.x, p.z - t.z);
}

std::vector<double> image_row(const ImageGrid& g, int iz)
{
    std::vector<double> out(g.axes.nx());
    for (int ix = 0; ix < g.axes.nx(); ++ix)
        out[ix] = g.values(iz, ix);
    return out;
}

// ---------------------------------------------------------------------------------------------

bool criterion1(Report& rep)
{
    Clock clock;
    Medium m;
    m.eps_r = 9.0;
    m.beta = 0.0;
    // Compact geometry: low platform and short aperture so the truncated flat segment covers the
    // specular footprint with the node density (512 per metre) of the full-scale surfaces.
    Acquisition acq = Acquisition::uniform(3.1e9, 5.1e9, 25, 5, 0.2, 0.1, m);
    RoughSurface flat = RoughSurface::flat(1.0, 512);
    CMatrix r = ground_bounce(flat, acq).values;
    double worst = 0.0;
    for (int i = 0; i < acq.n_freqs(); ++i)
        for (int n = 0; n < acq.n_positions(); ++n) {
            const Point p = acq.positions[n];
            worst = std::max(worst, rel(r(i, n), reflected_field(acq.omega(i), p, p, 9.0)));
        }
    const double t = clock.seconds();
    return rep.add("C1", worst <= 1e-2 && t <= 120.0,
                   "flat-interface BIE vs Sommerfeld reflected field, 25 freqs x 5 positions: max rel err " +
                       num(worst) + " (<= 1e-2), " + num(t) + " s (<= 120 s)");
}

bool criterion2(Report& rep)
{
    Clock clock;
    double worst = 0.0;
    const auto geoms = acceptance::random_geometries(20, 2024);
    for (const auto& g : geoms) {
        cdouble ref = acceptance::transmitted_oracle(g, 9.0);
        worst = std::max(worst, rel(field_down(g.omega, g.platform, g.image, 9.0), ref));
        worst = std::max(worst, rel(field_up(g.omega, g.image, g.platform, 9.0), ref));
    }
    const double t = clock.seconds();
    return rep.add("C2", worst <= 1e-6 && t <= 60.0,
                   "deformed contour (A 0.4, w 6, 500 nodes) vs damped real-axis oracle, 20 geometries: max rel err " +
                       num(worst) + " (<= 1e-6), " + num(t) + " s");
}

bool criterion4(Report& rep, const CMatrix& R, const std::string& label)
{
    SvdSpectrum sp = svd_spectrum(R);
    const double ratio = sp.sigma(4) / sp.sigma(0);
    std::string knee_text;
    int j = -1;
    try {
        KneeResult k = detect_knee(sp);
        j = k.j_star;
        knee_text = "j* " + std::to_string(j) + " (corner " + std::to_string(k.corner) + ")";
    } catch (const NumericalError& e) {
        knee_text = std::string("no knee: ") + e.what();
    }
    std::ostringstream logs;
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(sp.sigma.size(), 10); ++i)
        logs << (i ? " " : "") << num(std::log10(sp.sigma(i) / sp.sigma(0)), 3);
    const bool pass = ratio <= 1e-2 && j >= 4 && j <= 6;
    return rep.add("C4", pass,
                   label + ": sigma5/sigma1 " + num(ratio) + " (<= 1e-2), " + knee_text +
                       " (5 +- 1); log10 sigma_j/sigma_1 = " + logs.str());
}

// ---------------------------------------------------------------------------------------------

json small_pipeline_config()
{
    return json::parse(R"({
      "schema_version": 1,
      "name": "determinism",
      "surface": {"h_rms_m": 0.002, "corr_len_m": 0.08, "domain_len_m": 1.0, "n_points": 256, "seed": 3},
      "acquisition": {"freq_min_ghz": 3.1, "freq_max_ghz": 5.1, "n_freqs": 5, "n_positions": 5,
                      "aperture_m": 0.4, "altitude_m": 0.3},
      "medium": {"eps_r": 9.0, "beta": 0.1},
      "targets": [{"x_m": 0.01, "z_m": -0.06, "rho_re": 0.0, "rho_im": 3.4}],
      "noise": {"snr_db": 30.0, "seed": 1},
      "gbr": {"j_star": 1},
      "imaging": {"x_min_m": -0.06, "x_max_m": 0.06, "z_min_m": -0.1, "z_max_m": -0.02, "spacing_m": 0.005,
                  "delta": 0.01, "n_peaks": 1, "min_separation_m": 0.05, "subregion_half_width_m": 0.02}
    })");
}

// Property suites on a KM image, a data matrix and an illumination cache from the current profile.
bool criterion9(Report& rep, const ImageGrid& km, const CMatrix& D, const IlluminationCache& cache,
                const fs::path& out)
{
    bool all = true;
    {
        const double delta = 0.01;
        ImageGrid mkm = modified_km(km, delta);
        bool ok = std::abs(mobius(0.5, delta) - 0.0198020) < 1e-7;
        ok = ok && mkm.values.minCoeff() >= delta - 1e-15 && mkm.values.maxCoeff() <= 1.0 + 1e-15;
        Eigen::Index r0, c0, r1, c1;
        km.values.maxCoeff(&r0, &c0);
        mkm.values.maxCoeff(&r1, &c1);
        ok = ok && r0 == r1 && c0 == c1;
        std::vector<std::pair<double, double>> pairs;
        const double peak = km.values.maxCoeff();
        for (Eigen::Index i = 0; i < km.values.size(); ++i)
            pairs.emplace_back(km.values.data()[i] / peak, mkm.values.data()[i]);
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t i = 1; i < pairs.size(); ++i)
            ok = ok && pairs[i].second >= pairs[i - 1].second;
        all &= rep.add("C9a", ok, "Moebius map: range [delta, 1], monotone in the KM value, argmax preserved on a " +
                                      std::to_string(km.axes.nx()) + " x " + std::to_string(km.axes.nz()) + " image");
    }
    {
        SvdSpectrum sp = svd_spectrum(D);
        const int r = static_cast<int>(sp.sigma.size());
        double worst = 0.0;
        for (int j : {1, 3, 5}) {
            SvdSpectrum rest = svd_spectrum(remove_ground_bounce(sp, D, j));
            for (int i = 0; i + j < r; ++i)
                worst = std::max(worst, std::abs(rest.sigma(i) - sp.sigma(i + j)) / sp.sigma(0));
        }
        all &= rep.add("C9b", worst <= 1e-10,
                       "SVD shift identity sigma_i(D~) = sigma_{i+j*}(D), j* in {1,3,5}: max dev " + num(worst) +
                           " sigma_1 (<= 1e-10)");
    }
    {
        SurfaceSpec spec = fixture("single_target_8cm").surface;
        std::vector<RoughSurface> ens;
        for (int i = 0; i < 200; ++i) {
            spec.seed = 10000 + i;
            ens.push_back(generate_surface(spec));
        }
        SurfaceStats st = surface_stats(ens);
        const double dev = std::abs(st.rms / spec.h_rms - 1.0);
        all &= rep.add("C9c", dev <= 0.05,
                       "surface ensemble, 200 realizations: rms " + num(1000.0 * st.rms, 4) + " mm vs " +
                           num(1000.0 * spec.h_rms) + " mm, deviation " + num(100.0 * dev, 2) +
                           "% (<= 5%); correlation length " + cm(st.corr_len_est));
    }
    {
        double worst = 0.0;
        for (const cdouble& a : cache.data())
            worst = std::max(worst, std::abs(std::abs(a) - 1.0));
        all &= rep.add("C9d", worst <= 1e-12,
                       "illumination unit modulus over " + std::to_string(cache.data().size()) +
                           " entries: max ||a| - 1| " + num(worst) + " (<= 1e-12)");
    }
    {
        ExperimentConfig cfg = parse_config(small_pipeline_config());
        fs::path a = out / "determinism_a", b = out / "determinism_b";
        fs::remove_all(a);
        fs::remove_all(b);
        Pipeline(cfg, a).run();
        Pipeline(cfg, b).run();
        json ha = read_json((a / "run_manifest.json").string())["artifacts_sha256"];
        json hb = read_json((b / "run_manifest.json").string())["artifacts_sha256"];
        all &= rep.add("C9e", !ha.empty() && ha == hb,
                       "full-run determinism: " + std::to_string(ha.size()) +
                           " artifact hashes identical across two runs");
    }
    return all;
}

// ---------------------------------------------------------------------------------------------

int run_ci(Report& rep, const fs::path& out)
{
    Clock total;
    bool ok = criterion1(rep);
    ok &= criterion2(rep);
    rep.skip("C3", "bistatic Monte Carlo runs in the full profile");

    json j = fixture_json("single_target_8cm");
    j["surface"]["n_points"] = 512;
    j["acquisition"]["n_freqs"] = 9;
    j["acquisition"]["n_positions"] = 9;
    ExperimentConfig cfg = parse_config(j);
    RoughSurface surface = generate_surface(cfg.surface);
    ForwardResult fw = simulate(surface, cfg.acquisition, cfg.targets);
    ok &= criterion4(rep, fw.R.values, "R, M_s 512, 9 x 9, surface seed 7");

    for (const char* id : {"C5", "C6", "C7", "C8"})
        rep.skip(id, "imaging experiments run in the full profile");

    IlluminationCache cache = IlluminationCache::build(cfg.acquisition.freqs_hz, cfg.acquisition.positions,
                                                       cfg.grid(), cfg.acquisition.medium.eps_r, cfg.contour);
    NoisyData noisy = add_noise(fw.R, fw.S, cfg.noise.snr_db, cfg.noise.seed);
    ImageGrid km = km_image(remove_ground_bounce(noisy.D.values, 3), cache);
    ok &= criterion9(rep, km, noisy.D.values, cache, out);

    const double t = total.seconds();
    rep.add("C10", ok && t <= 120.0,
            "CI profile (M_s 512, M_f 9, N 9): " + num(t) + " s (<= 120 s), criteria 1, 2, 4, 9 " +
                (ok ? "passed" : "not all passed"));
    return 0;
}

struct SceneData {
    CMatrix R;
    std::vector<CMatrix> S_per_target;
    double seconds = 0.0;
};

// One forward solve per (surface, medium, acquisition) shared by several target scenes.
SceneData simulate_scenes(const ExperimentConfig& base, const std::vector<PointTarget>& targets)
{
    Clock clock;
    RoughSurface surface = generate_surface(base.surface);
    ForwardOptions opt;
    opt.bie = base.bie;
    ForwardResult fw = simulate(surface, base.acquisition, targets, opt);
    SceneData d;
    d.R = fw.R.values;
    for (const auto& s : fw.S_per_target)
        d.S_per_target.push_back(s.values);
    d.seconds = clock.seconds();
    return d;
}

void require_same_scene(const ExperimentConfig& a, const ExperimentConfig& b)
{
    const bool same = a.surface.seed == b.surface.seed && a.surface.n_points == b.surface.n_points &&
                      a.surface.h_rms == b.surface.h_rms && a.surface.corr_len == b.surface.corr_len &&
                      a.surface.domain_len == b.surface.domain_len &&
                      a.acquisition.freqs_hz == b.acquisition.freqs_hz &&
                      a.acquisition.medium.eps_r == b.acquisition.medium.eps_r &&
                      a.acquisition.medium.beta == b.acquisition.medium.beta &&
                      a.acquisition.n_positions() == b.acquisition.n_positions();
    if (!same)
        throw ConfigError("fixtures " + a.name + " and " + b.name + " do not share surface and acquisition");
}

std::string peak_text(const Peak& p)
{
    return "(" + num(100.0 * p.x, 3) + ", " + num(100.0 * p.z, 3) + ") cm";
}

int run_full(Report& rep, const fs::path& out)
{
    criterion1(rep);
    criterion2(rep);

    // C3: bistatic Monte Carlo with the minimum realization count.
    {
        ExperimentConfig cfg = fixture("bistatic_30deg");
        BistaticSpec spec = cfg.bistatic_spec();
        spec.n_realizations = 50;
        Clock clock;
        BistaticResult res = bistatic_xs(spec);
        const double t = clock.seconds();
        std::ofstream csv(out / "bistatic_50.csv");
        csv << "theta_s_deg,sigma_mean\n" << std::setprecision(17);
        for (std::size_t i = 0; i < res.theta_s_deg.size(); ++i)
            csv << res.theta_s_deg[i] << ',' << res.sigma_mean[i] << '\n';
        const auto it = std::max_element(res.sigma_mean.begin(), res.sigma_mean.end());
        const double arg = res.theta_s_deg[it - res.sigma_mean.begin()];
        rep.add("C3", std::abs(arg - spec.theta_i_deg) <= 1.0 && t <= 1800.0,
                "mean bistatic cross-section, 50 realizations, M_s " + std::to_string(spec.surface.n_points) +
                    ": argmax theta_s " + num(arg) + " deg (30 +- 1), " + num(t) + " s (<= 1800 s)");
    }

    // Single-target fixture end to end.
    ExperimentConfig st = fixture("single_target_8cm");
    const fs::path st_dir = out / st.name;
    fs::remove_all(st_dir);
    Clock clock;
    Pipeline(st, st_dir).run();
    const double t_run = clock.seconds();

    const CMatrix R = read_data_matrix((st_dir / "R.csv").string()).data.values;
    const CMatrix S = read_data_matrix((st_dir / "S.csv").string()).data.values;
    const IlluminationCache cache = IlluminationCache::load((st_dir / "illumination.bin").string());
    criterion4(rep, R, "R, M_s 2048, 25 x 21, surface seed 7");

    // C5: five noise seeds.
    const Point target = st.targets[0].pos;
    bool located = true, argmax_kept = true, fwhm_ok = true;
    std::string errors, ratios;
    Reconstruction first;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Reconstruction r = reconstruct(R, S, st, seed, st.noise.snr_db, cache);
        const Peak& p = r.peaks.front();
        const double err = distance(p, target);
        located &= err <= 0.01;
        errors += (seed > 1 ? ", " : "") + cm(err);

        ImageGrid mkm = modified_km(r.km, st.imaging.delta);
        Peak q = find_peaks(mkm, 1, 0.0).front();
        argmax_kept &= q.ix == p.ix && q.iz == p.iz;
        double ratio = std::nan("");
        try {
            ratio = fwhm(r.km.axes.x, image_row(r.km, p.iz), p.ix) / fwhm(mkm.axes.x, image_row(mkm, p.iz), p.ix);
        } catch (const NumericalError&) {
        }
        fwhm_ok &= ratio >= 5.0 && ratio <= 20.0;
        ratios += (seed > 1 ? ", " : "") + num(ratio);
        if (seed == 1)
            first = r;
    }
    rep.add("C5a", located, "single target (2, -8) cm, noise seeds 1-5: KM peak errors " + errors + " (<= 1 cm)");
    rep.add("C5b", argmax_kept && fwhm_ok,
            "modified KM, delta 1e-2: argmax " + std::string(argmax_kept ? "preserved" : "moved") +
                ", lateral FWHM reduction " + ratios + " (in [5, 20])");

    // C6: eSNR and the low-SNR fixture on the same scene.
    {
        const double e = first.noisy.esnr_db;
        rep.add("C6a", std::abs(e - 3.0) <= 1.0,
                "eSNR = 10 log10(|S|^2/|eta|^2) at SNR 24.2 dB: " + num(e) + " dB (3.0 +- 1); |S|/|eta| form " +
                    num(first.noisy.esnr_ratio_db) + " dB");
        ExperimentConfig low = fixture("low_snr_14dB");
        require_same_scene(st, low);
        Reconstruction r = reconstruct(R, S, low, low.noise.seed, low.noise.snr_db, cache);
        rep.add("C6b", std::abs(r.noisy.esnr_db + 7.0) <= 1.0,
                "eSNR at SNR 14.2 dB: " + num(r.noisy.esnr_db) + " dB (-7.0 +- 1); |S|/|eta| form " +
                    num(r.noisy.esnr_ratio_db) + " dB");
        const double err = distance(r.peaks.front(), low.targets[0].pos);
        rep.add("C6c", err > 0.02,
                "low-SNR localization fails: global KM max at " + peak_text(r.peaks.front()) + ", error " + cm(err) +
                    " (> 2 cm)");
    }

    // C7 and C8: scenes on the same surface at beta 0.1 share one forward solve.
    ExperimentConfig d12 = fixture("depth_12cm"), d16 = fixture("depth_16cm"), three = fixture("three_targets");
    ExperimentConfig d16b = fixture("depth_16cm_beta005");
    require_same_scene(d16, d12);
    require_same_scene(d16, three);
    std::vector<PointTarget> all{d12.targets[0], d16.targets[0]};
    all.insert(all.end(), three.targets.begin(), three.targets.end());
    SceneData beta010 = simulate_scenes(d16, all);
    SceneData beta005 = simulate_scenes(d16b, d16b.targets);
    rep.info("forward solves for the depth and three-target scenes: " + num(beta010.seconds) + " s (beta 0.1), " +
             num(beta005.seconds) + " s (beta 0.05)");

    auto single = [&](const ExperimentConfig& cfg, const CMatrix& r, const CMatrix& s) {
        Reconstruction rec = reconstruct(r, s, cfg, cfg.noise.seed, cfg.noise.snr_db, cache);
        return std::make_pair(rec.peaks.front(), distance(rec.peaks.front(), cfg.targets[0].pos));
    };
    {
        auto [p12, e12] = single(d12, beta010.R, beta010.S_per_target[0]);
        rep.info("depth 12 cm, beta 0.1: KM peak " + peak_text(p12) + ", error " + cm(e12));
        auto [p16, e16] = single(d16, beta010.R, beta010.S_per_target[1]);
        rep.add("C7a", e16 > 0.015,
                "depth 16 cm, beta 0.1 fails: KM peak " + peak_text(p16) + ", error " + cm(e16) + " (> 1.5 cm)");
        auto [pb, eb] = single(d16b, beta005.R, beta005.S_per_target[0]);
        rep.add("C7b", eb <= 0.015,
                "depth 16 cm, beta 0.05 succeeds: KM peak " + peak_text(pb) + ", error " + cm(eb) + " (<= 1.5 cm)");
    }
    {
        CMatrix s = beta010.S_per_target[2] + beta010.S_per_target[3] + beta010.S_per_target[4];
        Reconstruction rec = reconstruct(beta010.R, s, three, three.noise.seed, three.noise.snr_db, cache);
        // Peaks are matched to targets by the assignment with the smallest total distance.
        const int nt = static_cast<int>(three.targets.size());
        std::vector<int> perm(rec.peaks.size()), best;
        std::iota(perm.begin(), perm.end(), 0);
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double cost = 0.0;
            for (int t = 0; t < nt; ++t)
                cost += distance(rec.peaks[perm[t]], three.targets[t].pos);
            if (cost < best_cost) {
                best_cost = cost;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));

        std::string text;
        bool located3 = true, unit = true;
        const double hw = three.imaging.subregion_half_width;
        const Window& w = three.imaging.window;
        for (int t = 0; t < nt; ++t) {
            const Point tp = three.targets[t].pos;
            const Peak& p = rec.peaks[best[t]];
            const double err = distance(p, tp);
            located3 &= err <= 0.01;

            // sub-region centred on the target, clipped to the imaging window
            Window sub{std::max(tp.x - hw, w.x_min), std::min(tp.x + hw, w.x_max), std::max(tp.z - hw, w.z_min),
                       std::min(tp.z + hw, w.z_max)};
            ImageGrid local = modified_km(rec.km, three.imaging.delta, sub);
            Eigen::Index r0, c0;
            const double peak = local.values.maxCoeff(&r0, &c0);
            const double local_err = std::hypot(local.axes.x[c0] - tp.x, local.axes.z[r0] - tp.z);
            unit &= std::abs(peak - 1.0) <= 1e-12 && local_err <= 0.01;
            text += (t ? "; " : "") + std::string("target ") + std::to_string(t + 1) + ": KM peak " + peak_text(p) +
                    " error " + cm(err) + ", sub-region max " + num(peak, 15) + " at " + cm(local_err);
        }
        rep.add("C8", located3 && unit, "three targets: " + text + " (each <= 1 cm; sub-region max 1 within 1 cm of its target)");
    }

    criterion9(rep, first.km, first.noisy.D.values, cache, out);

    rep.add("C10", t_run <= 900.0,
            "single_target_8cm end to end at M_s 2048: " + num(t_run) + " s (<= 900 s), " +
                std::to_string(omp_get_max_threads()) + " thread(s)");
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::string profile = "ci";
    std::string out_dir = "acceptance_out";
    std::vector<std::string> known;
    app.add_option("--profile", profile, "ci or full")->check(CLI::IsMember({"ci", "full"}));
    app.add_option("--out", out_dir, "Scratch directory");
    app.add_option("--known-fail", known, "Criteria whose failure is documented and tolerated")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    fs::create_directories(out_dir);
    Report rep(std::set<std::string>(known.begin(), known.end()), fs::path(out_dir) / "acceptance_report.txt");
    rep.line("acceptance profile " + profile + ", roughsar " + version_string());
    try {
        if (profile == "ci")
            run_ci(rep, out_dir);
        else
            run_full(rep, out_dir);
    } catch (const std::exception& e) {
        rep.line(std::string("ERROR ") + e.what());
        rep.finish();
        return 2;
    }
    return rep.finish();
}
