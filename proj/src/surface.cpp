#include "roughsar/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>

#include <fftw3.h>

namespace roughsar {

namespace {

std::mutex g_fftw_plan_mutex;

// h_j = sum_n c_n exp(2 pi i n j / M) for a Hermitian spectrum given on n = 0..M/2.
std::vector<double> hermitian_synthesis(std::vector<cdouble> c, int m)
{
    std::vector<double> out(m);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        plan = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(c.data()), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

double gaussian_spectrum(double k, double h_rms, double corr_len)
{
    return h_rms * h_rms * corr_len / (2.0 * std::sqrt(kPi)) * std::exp(-k * k * corr_len * corr_len / 4.0);
}

void validate(const SurfaceSpec& spec)
{
    if (!(spec.h_rms >= 0.0) || !std::isfinite(spec.h_rms))
        throw ConfigError("surface: h_rms must be finite and non-negative");
    if (!(spec.corr_len > 0.0))
        throw ConfigError("surface: corr_len must be positive");
    if (!(spec.domain_len >= 10.0 * spec.corr_len))
        throw ConfigError("surface: domain_len must be at least 10 correlation lengths");
    if (spec.n_points < 4 || spec.n_points % 2 != 0)
        throw ConfigError("surface: n_points must be even and >= 4");
    double dt = spec.domain_len / spec.n_points;
    if (spec.corr_len / dt < 2.0)
        throw ConfigError("surface: fewer than 2 nodes per correlation length");
}

RoughSurface RoughSurface::flat(double domain_len, int n_points)
{
    RoughSurface s;
    s.domain_len = domain_len;
    s.dt = domain_len / n_points;
    s.t.resize(n_points);
    for (int j = 0; j < n_points; ++j)
        s.t[j] = -0.5 * domain_len + j * s.dt;
    s.h.assign(n_points, 0.0);
    s.h1.assign(n_points, 0.0);
    s.h2.assign(n_points, 0.0);
    return s;
}

double RoughSurface::max_height() const
{
    return h.empty() ? 0.0 : *std::max_element(h.begin(), h.end());
}

double RoughSurface::min_height() const
{
    return h.empty() ? 0.0 : *std::min_element(h.begin(), h.end());
}

double RoughSurface::height_at(double x) const
{
    const int m = size();
    double u = (x - t.front()) / dt;
    u -= m * std::floor(u / m);
    int j = static_cast<int>(std::floor(u));
    double f = u - j;
    j %= m;
    return (1.0 - f) * h[j] + f * h[(j + 1) % m];
}

RoughSurface generate_surface(const SurfaceSpec& spec)
{
    validate(spec);
    const int m = spec.n_points;
    RoughSurface s = RoughSurface::flat(spec.domain_len, m);
    if (spec.h_rms == 0.0)
        return s;

    const double dk = 2.0 * kPi / spec.domain_len;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<cdouble> c0(m / 2 + 1, 0.0), c1(m / 2 + 1, 0.0), c2(m / 2 + 1, 0.0);
    for (int n = 1; n < m / 2; ++n) {
        double k = n * dk;
        double a = normal(rng);
        double b = normal(rng);
        double amp = std::sqrt(gaussian_spectrum(k, spec.h_rms, spec.corr_len) * dk / 2.0);
        // (-1)^n shifts the origin to t_0 = -L/2.
        cdouble bn = amp * cdouble(a, b) * ((n % 2 == 0) ? 1.0 : -1.0);
        c0[n] = bn;
        c1[n] = cdouble(0.0, k) * bn;
        c2[n] = -k * k * bn;
    }

    s.h = hermitian_synthesis(c0, m);
    s.h1 = hermitian_synthesis(c1, m);
    s.h2 = hermitian_synthesis(c2, m);

    double mean = 0.0;
    for (double v : s.h)
        mean += v;
    mean /= m;
    for (double& v : s.h)
        v -= mean;
    return s;
}

SurfaceStats surface_stats(const std::vector<RoughSurface>& surfaces)
{
    if (surfaces.empty())
        throw ConfigError("surface_stats: no realizations");
    const int m = surfaces.front().size();
    const double dt = surfaces.front().dt;
    for (const auto& s : surfaces)
        if (s.size() != m || std::abs(s.dt - dt) > 1e-15 * dt)
            throw ConfigError("surface_stats: mismatched grids");

    std::vector<double> acf(m / 2 + 1, 0.0);
    for (const auto& s : surfaces)
        for (int lag = 0; lag <= m / 2; ++lag)
            for (int j = 0; j < m; ++j)
                acf[lag] += s.h[j] * s.h[(j + lag) % m];
    const double count = static_cast<double>(surfaces.size()) * m;
    for (double& v : acf)
        v /= count;

    SurfaceStats st;
    st.rms = std::sqrt(acf[0]);
    st.corr_len_est = std::numeric_limits<double>::quiet_NaN();
    if (acf[0] <= 0.0)
        return st;
    const double target = std::exp(-1.0);
    for (int lag = 1; lag <= m / 2; ++lag) {
        double r1 = acf[lag] / acf[0];
        if (r1 < target) {
            double r0 = acf[lag - 1] / acf[0];
            st.corr_len_est = dt * ((lag - 1) + (r0 - target) / (r0 - r1));
            break;
        }
    }
    return st;
}

void write_surface_csv(const std::string& path, const RoughSurface& s)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17);
    out << "t,h,h1,h2\n";
    for (int j = 0; j < s.size(); ++j)
        out << s.t[j] << ',' << s.h[j] << ',' << s.h1[j] << ',' << s.h2[j] << '\n';
}

RoughSurface read_surface_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("t,h,h1,h2", 0) != 0)
        throw ConfigError(path + ": unexpected surface header");
    RoughSurface s;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        double v[4];
        char comma;
        ss >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
        if (!ss)
            throw ConfigError(path + ": malformed row");
        s.t.push_back(v[0]);
        s.h.push_back(v[1]);
        s.h1.push_back(v[2]);
        s.h2.push_back(v[3]);
    }
    if (s.t.size() < 4)
        throw ConfigError(path + ": too few nodes");
    s.domain_len = -2.0 * s.t.front();
    s.dt = s.domain_len / static_cast<double>(s.t.size());
    return s;
}

}  // namespace roughsar
