#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "roughsar/config.hpp"
#include "roughsar/forward.hpp"
#include "roughsar/io.hpp"
#include "roughsar/pipeline.hpp"

using namespace roughsar;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_config()
{
    return json::parse(R"({
      "schema_version": 1,
      "name": "small",
      "surface": {"h_rms_m": 0.002, "corr_len_m": 0.08, "domain_len_m": 1.0, "n_points": 256, "seed": 3},
      "acquisition": {"freq_min_ghz": 3.1, "freq_max_ghz": 5.1, "n_freqs": 5, "n_positions": 5,
                      "aperture_m": 0.4, "altitude_m": 0.3},
      "medium": {"eps_r": 9.0, "beta": 0.1},
      "targets": [{"x_m": 0.01, "z_m": -0.06, "rho_re": 0.0, "rho_im": 3.4}],
      "noise": {"snr_db": 30.0, "seed": 1},
      "gbr": {"j_star": 1},
      "imaging": {"x_min_m": -0.06, "x_max_m": 0.06, "z_min_m": -0.1, "z_max_m": -0.02, "spacing_m": 0.005,
                  "delta": 0.01, "n_peaks": 1, "min_separation_m": 0.05, "subregion_half_width_m": 0.02},
      "solver": {"diagonal_rule": "log_corrected", "threads": 0}
    })");
}

fs::path fresh_dir(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("roughsar_test_pipeline_" + name);
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args)
{
    std::string cmd = std::string(ROUGHSAR_CLI) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const json& j)
{
    fs::create_directories(dir);
    fs::path p = dir / "config.json";
    write_json(p.string(), j);
    return p;
}

const char* const kArtifacts[] = {"surface.csv",   "R.csv",        "S.csv",          "eta.csv",
                                  "D.csv",         "D.json",       "spectrum_D.csv", "spectrum_R.csv",
                                  "D_tilde.csv",   "image_km.csv", "image_km.pgm",   "image_mkm.csv",
                                  "image_mkm.pgm", "peaks.json",   "illumination.bin", "run_manifest.json"};

}  // namespace

TEST_CASE("monolithic run writes every artifact and a complete manifest")
{
    fs::path out = fresh_dir("mono");
    Pipeline p(parse_config(small_config()), out);
    json summary = p.run();
    for (const char* f : kArtifacts) {
        CAPTURE(f);
        CHECK(fs::exists(out / f));
    }
    CHECK(summary["gbr"]["j_star"] == 1);
    CHECK(summary["forward"]["snr_db_realized"].get<double>() == doctest::Approx(30.0));

    json m = read_json((out / "run_manifest.json").string());
    CHECK(m["status"] == "ok");
    CHECK(m["config_sha256"] == config_hash(p.config()));
    CHECK(m["seeds"]["surface"] == 3);
    CHECK(m["seeds"]["noise"] == 1);
    for (const char* s : {"surface", "forward", "gbr", "image", "peaks"})
        CHECK(m["stages"][s]["status"] == "ok");
    CHECK(m["artifacts_sha256"]["D.csv"] == sha256_hex(slurp(out / "D.csv")));
    CHECK(m["versions"].contains("eigen"));

    json pk = read_json((out / "peaks.json").string());
    CHECK(pk["peaks"][0]["subregion"]["max_value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("runs are deterministic and chained stages match the monolithic run")
{
    fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    Pipeline(parse_config(small_config()), a).run();
    for (const char* stage : {"surface", "forward", "gbr", "image", "peaks"})
        Pipeline(parse_config(small_config()), b).run_stage(stage);
    for (const char* f : {"surface.csv", "R.csv", "S.csv", "D.csv", "D_tilde.csv", "image_km.csv", "image_mkm.csv",
                          "peaks.json", "illumination.bin"}) {
        CAPTURE(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }

    json m = read_json((b / "run_manifest.json").string());
    CHECK(m["status"] == "ok");
    json again = Pipeline(parse_config(small_config()), b).run_stage("image");
    CHECK(again["illumination_cache_reused"] == true);
}

TEST_CASE("a stage without its inputs fails and marks the run partial")
{
    fs::path out = fresh_dir("partial");
    Pipeline p(parse_config(small_config()), out);
    p.run_stage("surface");
    CHECK_THROWS(p.run_stage("image"));
    json m = read_json((out / "run_manifest.json").string());
    CHECK(m["status"] == "partial");
    CHECK(m["stages"]["image"]["status"] == "failed");
    CHECK_THROWS_AS(p.run_stage("polish"), ConfigError);
}

TEST_CASE("noiseless flat-interface data focuses on the target")
{
    Medium m;
    m.eps_r = 9.0;
    Acquisition acq = Acquisition::uniform(3.1e9, 5.1e9, 9, 9, 0.4, 0.3, m);
    RoughSurface flat = RoughSurface::flat(1.0, 512);
    PointTarget t{{0.015, -0.06}, cdouble(0.0, 3.4)};
    CMatrix s = scattered(flat, acq, {t}).values;
    GridAxes grid = GridAxes::uniform(-0.06, 0.06, -0.1, -0.02, 0.005);
    ImageGrid img = km_image(s, IlluminationCache::build(acq.freqs_hz, acq.positions, grid, 9.0));
    Peak pk = find_peaks(img, 1, 0.0).front();
    CHECK(std::abs(pk.x - t.pos.x) <= 0.005 + 1e-12);
    CHECK(std::abs(pk.z - t.pos.z) <= 0.005 + 1e-12);
}

TEST_CASE("command-line exit codes")
{
    fs::path dir = fresh_dir("cli");
    fs::path cfg = write_config(dir, small_config());
    const std::string base = "--config " + cfg.string() + " --out " + (dir / "run").string();
    CHECK(run_cli("run " + base) == 0);
    CHECK(fs::exists(dir / "run" / "image_mkm.csv"));
    CHECK(run_cli("gbr " + base + " --jstar 2") == 0);
    CHECK(read_json((dir / "run" / "gbr_report.json").string())["j_star"] == 2);

    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("run " + base + " --jstar many") == 2);
    CHECK(run_cli("image " + base + " --delta 2") == 2);
    CHECK(run_cli("dance " + base) != 0);

    json bad = small_config();
    bad["surface"]["roughness"] = 1;
    fs::path bad_cfg = dir / "bad.json";
    write_json(bad_cfg.string(), bad);
    CHECK(run_cli("run --config " + bad_cfg.string() + " --out " + (dir / "bad").string()) == 2);

    // five singular values cannot carry an automatic knee within J_max = 2
    CHECK(run_cli("gbr " + base + " --jstar auto") == 3);
}
