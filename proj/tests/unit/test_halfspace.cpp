#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "../oracles/real_axis.hpp"
#include "roughsar/halfspace.hpp"
#include "roughsar/kernels.hpp"

using namespace roughsar;

namespace {

double rel(cdouble a, cdouble b)
{
    return std::abs(a - b) / std::abs(b);
}

struct Geometry {
    double omega;
    Point platform, image;
};

std::vector<Geometry> random_geometries(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> f(3.1e9, 5.1e9), x(-0.6, 0.6), alt(0.3, 1.5), depth(0.02, 0.25);
    std::vector<Geometry> g;
    for (int i = 0; i < n; ++i)
        g.push_back({2.0 * kPi * f(rng), {x(rng), alt(rng)}, {x(rng) * 0.25, -depth(rng)}});
    return g;
}

}  // namespace

TEST_CASE("contour spec validation")
{
    ContourSpec c;
    CHECK_NOTHROW(validate(c));
    c.A = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = ContourSpec{};
    c.n_quad = 50;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = ContourSpec{};
    c.w = -1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("identical media reduce to the free-space Green's function")
{
    for (const auto& g : random_geometries(20, 42)) {
        const double k0 = g.omega / kSpeedOfLight;
        cdouble u = field_down(g.omega, g.platform, g.image, 1.0);
        CHECK(rel(u, green(k0, g.platform, g.image)) < 1e-8);
    }
}

TEST_CASE("reciprocity between field_down and field_up")
{
    for (const auto& g : random_geometries(5, 3)) {
        cdouble d = field_down(g.omega, g.platform, g.image, 9.0);
        cdouble u = field_up(g.omega, g.image, g.platform, 9.0);
        CHECK(rel(d, u) < 1e-13);
    }
}

TEST_CASE("even weight is symmetric in gamma")
{
    auto f = [](cdouble, cdouble, cdouble) { return cdouble(1.0, 0.0); };
    const double k0 = 80.0;
    CHECK(rel(sommerfeld(k0, 9.0, 0.7, 0.05, 0.13, f), sommerfeld(k0, 9.0, 0.7, 0.05, -0.13, f)) < 1e-13);
}

TEST_CASE("contour independence")
{
    for (const auto& g : random_geometries(6, 7)) {
        cdouble base = field_down(g.omega, g.platform, g.image, 9.0);
        ContourSpec dbl;
        dbl.n_quad = 1000;
        CHECK(rel(field_down(g.omega, g.platform, g.image, 9.0, dbl), base) < 1e-8);
        for (double a : {0.3, 0.5}) {
            ContourSpec c;
            c.A = a;
            CHECK(rel(field_down(g.omega, g.platform, g.image, 9.0, c), base) < 1e-8);
        }
    }
}

TEST_CASE("deformed contour matches the damped real-axis oracle")
{
    const double eps_r = 9.0;
    for (const auto& g : random_geometries(4, 1234)) {
        const double k0 = g.omega / kSpeedOfLight;
        oracle::RealAxisProblem p{k0,
                                  k0 * std::sqrt(eps_r),
                                  g.platform.z,
                                  -g.image.z,
                                  g.image.x - g.platform.x,
                                  [](oracle::cplx, oracle::cplx, oracle::cplx) { return oracle::cplx(0.0, 0.5 / kPi); }};
        cdouble ref = oracle::damped_extrapolation(p);
        cdouble direct = oracle::integrate_real_axis(p);
        cdouble u = field_down(g.omega, g.platform, g.image, eps_r);
        CHECK(rel(u, ref) < 1e-6);
        CHECK(rel(u, direct) < 1e-6);
    }
}

TEST_CASE("reflected field matches the real-axis oracle")
{
    const double eps_r = 9.0, omega = 2.0 * kPi * 4.1e9, k0 = omega / kSpeedOfLight;
    Point s{0.0, 0.1}, r{0.05, 0.1};
    oracle::RealAxisProblem p{k0, k0 * std::sqrt(eps_r), s.z + r.z, 0.0, r.x - s.x,
                              [](oracle::cplx, oracle::cplx q0, oracle::cplx q1) {
                                  return oracle::cplx(0.0, 0.25 / kPi) * (q0 - q1) / q0;
                              }};
    CHECK(rel(reflected_field(omega, s, r, eps_r), oracle::integrate_real_axis(p)) < 1e-6);
}

TEST_CASE("normal-incidence reflected field approaches the image-source limit")
{
    // Far above the interface the reflected field tends to Gamma G0(2 z) with Gamma = (1 - n) / (1 + n).
    const double eps_r = 9.0, omega = 2.0 * kPi * 4.1e9, k0 = omega / kSpeedOfLight, z = 5.0;
    cdouble r = reflected_field(omega, {0.0, z}, {0.0, z}, eps_r);
    cdouble image = (1.0 - 3.0) / (1.0 + 3.0) * green(k0, {0.0, z}, {0.0, -z});
    CHECK(rel(r, image) < 1e-2);
}

TEST_CASE("argument validation")
{
    const double omega = 2.0 * kPi * 4e9;
    CHECK_THROWS_AS(field_down(omega, {0.0, -0.1}, {0.0, -0.1}, 9.0), ConfigError);
    CHECK_THROWS_AS(field_down(omega, {0.0, 1.0}, {0.0, 0.1}, 9.0), ConfigError);
    auto f = [](cdouble, cdouble, cdouble) { return cdouble(1.0); };
    CHECK_THROWS_AS(sommerfeld(80.0, 9.0, 0.0, 0.0, 0.1, f), ConfigError);
    CHECK_THROWS_AS(sommerfeld(80.0, 9.0, -0.1, 0.2, 0.1, f), ConfigError);
}

TEST_CASE("illuminations are unit modulus and the cache equals direct evaluation")
{
    std::vector<double> freqs{3.1e9, 4.1e9, 5.1e9};
    std::vector<Point> pos{{-0.5, 1.0}, {0.0, 1.0}, {0.5, 1.0}};
    GridAxes grid = GridAxes::uniform(-0.05, 0.05, -0.1, -0.04, 0.01);
    IlluminationCache cache = IlluminationCache::build(freqs, pos, grid, 9.0);
    REQUIRE(cache.n_points() == grid.size());
    double worst = 0.0, worst_mod = 0.0;
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            for (int p = 0; p < grid.size(); ++p) {
                cdouble direct = illumination(2.0 * kPi * freqs[m], pos[n], grid.point(p), 9.0);
                worst = std::max(worst, std::abs(cache.at(m, n, p) - direct));
                worst_mod = std::max(worst_mod, std::abs(std::abs(cache.at(m, n, p)) - 1.0));
                worst_mod = std::max(worst_mod, std::abs(std::abs(direct) - 1.0));
            }
    CHECK(worst < 1e-12);
    CHECK(worst_mod < 1e-14);

    auto path = std::filesystem::temp_directory_path() / "roughsar_illum_test.bin";
    cache.save(path.string());
    IlluminationCache back = IlluminationCache::load(path.string());
    CHECK(back.data() == cache.data());
    CHECK(back.acquisition_hash() == cache.acquisition_hash());
    CHECK(back.acquisition_hash() == acquisition_fingerprint(freqs, pos, grid, 9.0));
    CHECK(back.grid().x == grid.x);

    std::ofstream(path, std::ios::binary | std::ios::trunc) << "{\"schema_version\": 99}\n";
    CHECK_THROWS(IlluminationCache::load(path.string()));
    std::filesystem::remove(path);
}

TEST_CASE("mirrored image point gives the mirrored illumination for a centered platform")
{
    const double omega = 2.0 * kPi * 4.1e9;
    cdouble a = illumination(omega, {0.0, 1.0}, {0.04, -0.08}, 9.0);
    cdouble b = illumination(omega, {0.0, 1.0}, {-0.04, -0.08}, 9.0);
    CHECK(std::abs(a - b) < 1e-12);
}
