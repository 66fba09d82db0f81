#include "roughsar/halfspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "roughsar/io.hpp"

namespace roughsar {

namespace {

constexpr cdouble I(0.0, 1.0);
constexpr double kMinBranchDistance = 1e-6;
constexpr double kTruncationTolerance = 1e-13;

cdouble upper_sqrt(cdouble v)
{
    cdouble q = std::sqrt(v);
    return q.imag() < 0.0 ? -q : q;
}

void check_truncation(const std::vector<cdouble>& integrand)
{
    double peak = 0.0;
    for (const auto& v : integrand)
        peak = std::max(peak, std::abs(v));
    double tail = std::max(std::abs(integrand.front()), std::abs(integrand.back()));
    if (peak > 0.0 && tail > kTruncationTolerance * peak)
        throw NumericalError("sommerfeld: truncation residual above threshold");
}

}  // namespace

void validate(const ContourSpec& c)
{
    if (!(c.A > 0.0) || !(c.w > 0.0))
        throw ConfigError("contour: A and w must be positive");
    if (c.n_quad < 100)
        throw ConfigError("contour: n_quad must be >= 100");
    if (c.s_max < 0.0)
        throw ConfigError("contour: s_max must be non-negative");
}

double default_s_max(double k0, double eps_r, double beta1, double beta2)
{
    constexpr double eps = 1e-3;
    return std::sqrt(eps_r) + 40.0 / (k0 * std::max({beta1, beta2, eps}));
}

SommerfeldContour::SommerfeldContour(double k0_, double eps_r_, double s_max, const ContourSpec& spec)
    : k0(k0_), eps_r(eps_r_)
{
    validate(spec);
    if (!(k0 > 0.0))
        throw ConfigError("sommerfeld: k0 must be positive");
    if (!(eps_r >= 1.0))
        throw ConfigError("sommerfeld: eps_r must be >= 1");
    const double kappa = std::sqrt(eps_r);
    const int n = spec.n_quad;
    const double a = spec.A, w = spec.w;
    const double tmax = spec.sinh_map ? std::asinh(s_max) : s_max;
    const double step = 2.0 * tmax / (n - 1);
    xi.resize(n);
    q0.resize(n);
    q1.resize(n);
    weight.resize(n);
    double min_branch = INFINITY;
    for (int j = 0; j < n; ++j) {
        double tau = -tmax + j * step;
        double s = spec.sinh_map ? std::sinh(tau) : tau;
        double jac = spec.sinh_map ? std::cosh(tau) : 1.0;
        double g[4], dg[4];
        const double centers[4] = {-1.0, -kappa, 1.0, kappa};
        for (int b = 0; b < 4; ++b) {
            double d = s - centers[b];
            g[b] = std::exp(-w * d * d);
            dg[b] = -2.0 * w * d * g[b];
        }
        cdouble x = s + I * a * (g[0] + g[1] - g[2] - g[3]);
        cdouble dx = 1.0 + I * a * (dg[0] + dg[1] - dg[2] - dg[3]);
        cdouble p0 = upper_sqrt(1.0 - x * x);
        cdouble p1 = upper_sqrt(eps_r - x * x);
        min_branch = std::min({min_branch, std::abs(p0), std::abs(p1)});
        double trap = (j == 0 || j == n - 1) ? 0.5 * step : step;
        xi[j] = k0 * x;
        q0[j] = k0 * p0;
        q1[j] = k0 * p1;
        // k0 from dxi cancels against 1/(q0 + q1).
        weight[j] = trap * jac * dx / (p0 + p1);
    }
    if (min_branch < kMinBranchDistance)
        throw NumericalError("sommerfeld: contour passes too close to a branch point");
}

cdouble sommerfeld(double k0, double eps_r, double beta1, double beta2, double gamma, const SpectralWeight& f,
                   const ContourSpec& contour)
{
    if (beta1 < 0.0 || beta2 < 0.0 || beta1 + beta2 <= 0.0)
        throw ConfigError("sommerfeld: beta1, beta2 must be non-negative and not both zero");
    double s_max = contour.s_max > 0.0 ? contour.s_max : default_s_max(k0, eps_r, beta1, beta2);
    SommerfeldContour c(k0, eps_r, s_max, contour);
    std::vector<cdouble> terms(c.size());
    cdouble sum = 0.0;
    for (int j = 0; j < c.size(); ++j) {
        cdouble e = std::exp(I * (beta1 * c.q0[j] + beta2 * c.q1[j] + gamma * c.xi[j]));
        terms[j] = f(c.xi[j], c.q0[j], c.q1[j]) * e * c.weight[j];
        sum += terms[j];
    }
    check_truncation(terms);
    return sum;
}

cdouble field_down(double omega, Point platform, Point image, double eps_r, const ContourSpec& contour, double c)
{
    if (!(platform.z > 0.0))
        throw ConfigError("field_down: platform must be above the interface");
    if (!(image.z < 0.0))
        throw ConfigError("field_down: evaluation point must be below the interface");
    const cdouble pre = I / (2.0 * kPi);
    return sommerfeld(omega / c, eps_r, platform.z, -image.z, image.x - platform.x,
                      [pre](cdouble, cdouble, cdouble) { return pre; }, contour);
}

cdouble field_up(double omega, Point image, Point platform, double eps_r, const ContourSpec& contour, double c)
{
    if (!(platform.z > 0.0))
        throw ConfigError("field_up: evaluation point must be above the interface");
    if (!(image.z < 0.0))
        throw ConfigError("field_up: source must be below the interface");
    const cdouble pre = I / (2.0 * kPi);
    return sommerfeld(omega / c, eps_r, platform.z, -image.z, platform.x - image.x,
                      [pre](cdouble, cdouble, cdouble) { return pre; }, contour);
}

cdouble reflected_field(double omega, Point source, Point receiver, double eps_r, const ContourSpec& contour,
                        double c)
{
    if (!(source.z > 0.0) || !(receiver.z > 0.0))
        throw ConfigError("reflected_field: points must be above the interface");
    const cdouble pre = I / (4.0 * kPi);
    return sommerfeld(omega / c, eps_r, source.z + receiver.z, 0.0, receiver.x - source.x,
                      [pre](cdouble, cdouble q0, cdouble q1) { return pre * (q0 - q1) / q0; }, contour);
}

cdouble illumination(double omega, Point platform, Point image, double eps_r, const ContourSpec& contour, double c)
{
    cdouble u0 = field_down(omega, platform, image, eps_r, contour, c);
    cdouble u1 = field_up(omega, image, platform, eps_r, contour, c);
    if (std::abs(u0) == 0.0 || std::abs(u1) == 0.0)
        throw NumericalError("illumination: vanishing transmitted field");
    return (u0 / std::abs(u0)) * (u1 / std::abs(u1));
}

std::string acquisition_fingerprint(const std::vector<double>& freqs_hz, const std::vector<Point>& positions,
                                    const GridAxes& grid, double eps_r)
{
    nlohmann::json j;
    j["freqs_hz"] = freqs_hz;
    std::vector<double> px, pz;
    for (const auto& p : positions) {
        px.push_back(p.x);
        pz.push_back(p.z);
    }
    j["positions_x"] = px;
    j["positions_z"] = pz;
    j["grid_x"] = grid.x;
    j["grid_z"] = grid.z;
    j["eps_r"] = eps_r;
    return sha256_hex(j.dump()).substr(0, 16);
}

IlluminationCache IlluminationCache::build(const std::vector<double>& freqs_hz, const std::vector<Point>& positions,
                                           const GridAxes& grid, double eps_r, const ContourSpec& contour, double c)
{
    validate(contour);
    if (freqs_hz.empty() || positions.empty() || grid.size() == 0)
        throw ConfigError("illumination cache: empty acquisition or grid");
    double z_low = INFINITY;
    for (const auto& p : positions) {
        if (!(p.z > 0.0))
            throw ConfigError("illumination cache: platform below the interface");
        z_low = std::min(z_low, p.z);
    }
    for (double z : grid.z)
        if (!(z < 0.0))
            throw ConfigError("illumination cache: grid must lie below the interface");

    IlluminationCache cache;
    cache.n_freqs_ = static_cast<int>(freqs_hz.size());
    cache.n_positions_ = static_cast<int>(positions.size());
    cache.n_points_ = grid.size();
    cache.grid_ = grid;
    cache.eps_r_ = eps_r;
    cache.acquisition_hash_ = acquisition_fingerprint(freqs_hz, positions, grid, eps_r);
    cache.data_.resize(static_cast<std::size_t>(cache.n_freqs_) * cache.n_positions_ * cache.n_points_);

    const int nn = cache.n_positions_, np = cache.n_points_, nx = grid.nx(), nz = grid.nz();
    const cdouble pre = I / (2.0 * kPi);
    for (int m = 0; m < cache.n_freqs_; ++m) {
        const double k0 = 2.0 * kPi * freqs_hz[m] / c;
        // The platform height bounds beta1 from below for every image point.
        double s_max = contour.s_max > 0.0 ? contour.s_max : default_s_max(k0, eps_r, z_low, 0.0);
        SommerfeldContour sc(k0, eps_r, s_max, contour);
        const int nj = sc.size();

        CMatrix left(nn, nj);
        for (int j = 0; j < nj; ++j)
            for (int n = 0; n < nn; ++n)
                left(n, j) = pre * sc.weight[j] * std::exp(I * (positions[n].z * sc.q0[j] - sc.xi[j] * positions[n].x));

        CMatrix ex(nj, nx), ez(nj, nz);
        for (int j = 0; j < nj; ++j) {
            for (int ix = 0; ix < nx; ++ix)
                ex(j, ix) = std::exp(I * sc.xi[j] * grid.x[ix]);
            for (int iz = 0; iz < nz; ++iz)
                ez(j, iz) = std::exp(-I * sc.q1[j] * grid.z[iz]);
        }
        CMatrix right(nj, np);
#pragma omp parallel for schedule(static)
        for (int p = 0; p < np; ++p)
            right.col(p) = ex.col(p % nx).cwiseProduct(ez.col(p / nx));

        CMatrix u = left * right;  // (nn x np); u^(1) coincides with u^(0) on the odd-symmetric contour
        for (int n = 0; n < nn; ++n)
            for (int p = 0; p < np; ++p) {
                cdouble v = u(n, p);
                double mag = std::abs(v);
                if (mag == 0.0)
                    throw NumericalError("illumination cache: vanishing transmitted field");
                cdouble phase = v / mag;
                cache.data_[(static_cast<std::size_t>(m) * nn + n) * np + p] = phase * phase;
            }
    }
    return cache;
}

void IlluminationCache::save(const std::string& path) const
{
    static_assert(std::endian::native == std::endian::little, "cache layout assumes a little-endian host");
    nlohmann::json h;
    h["schema_version"] = kSchemaVersion;
    h["format"] = "roughsar-illumination";
    h["layout"] = "row-major (m, n, p), little-endian float64 (re, im)";
    h["n_freqs"] = n_freqs_;
    h["n_positions"] = n_positions_;
    h["n_points"] = n_points_;
    h["grid_x"] = grid_.x;
    h["grid_z"] = grid_.z;
    h["eps_r"] = eps_r_;
    h["acquisition_hash"] = acquisition_hash_;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << h.dump() << '\n';
    out.write(reinterpret_cast<const char*>(data_.data()), static_cast<std::streamsize>(data_.size() * sizeof(cdouble)));
    if (!out)
        throw std::runtime_error("short write " + path);
}

IlluminationCache IlluminationCache::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read " + path);
    std::string line;
    std::getline(in, line);
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": bad cache header");
    }
    if (h.value("format", "") != "roughsar-illumination")
        throw ConfigError(path + ": not an illumination cache");
    check_schema_version(h, path);
    IlluminationCache c;
    c.n_freqs_ = h.at("n_freqs");
    c.n_positions_ = h.at("n_positions");
    c.n_points_ = h.at("n_points");
    c.grid_.x = h.at("grid_x").get<std::vector<double>>();
    c.grid_.z = h.at("grid_z").get<std::vector<double>>();
    c.eps_r_ = h.at("eps_r");
    c.acquisition_hash_ = h.at("acquisition_hash");
    if (c.grid_.size() != c.n_points_)
        throw ConfigError(path + ": grid does not match point count");
    c.data_.resize(static_cast<std::size_t>(c.n_freqs_) * c.n_positions_ * c.n_points_);
    in.read(reinterpret_cast<char*>(c.data_.data()), static_cast<std::streamsize>(c.data_.size() * sizeof(cdouble)));
    if (!in)
        throw ConfigError(path + ": truncated cache");
    return c;
}

}  // namespace roughsar
