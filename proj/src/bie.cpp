#include "roughsar/bie.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace roughsar {

namespace {

constexpr cdouble I(0.0, 1.0);

void check_surface(const RoughSurface& s)
{
    const int m = s.size();
    if (m < 4 || static_cast<int>(s.h.size()) != m || static_cast<int>(s.h1.size()) != m ||
        static_cast<int>(s.h2.size()) != m)
        throw ConfigError("bie: surface arrays are inconsistent");
    if (!(s.dt > 0.0))
        throw ConfigError("bie: surface spacing must be positive");
}

void check_wavenumber(cdouble k)
{
    if (!(k.real() > 0.0) || k.imag() < 0.0 || !std::isfinite(std::abs(k)))
        throw ConfigError("bie: wavenumber must lie in the upper half-plane");
}

void check_evaluation_point(const RoughSurface& s, Point p, Side side)
{
    double gap = p.z - s.height_at(p.x);
    if (side == Side::Above ? !(gap > 0.0) : !(gap < 0.0))
        throw ConfigError("bie: evaluation point on the wrong side of the surface");
    for (int j = 0; j < s.size(); ++j)
        if (std::hypot(p.x - s.t[j], p.z - s.h[j]) < s.dt)
            throw ConfigError("bie: evaluation point within one node spacing of the surface");
}

}  // namespace

double diagonal_a(double dt, double slope, double curvature)
{
    return dt * curvature / (4.0 * kPi * (1.0 + slope * slope));
}

cdouble diagonal_b(cdouble k, double dt, double slope, DiagonalRule rule)
{
    const double s = std::sqrt(1.0 + slope * slope);
    const cdouble base = cdouble(-kEulerGamma, 0.5 * kPi);
    if (rule == DiagonalRule::CellAverage)
        return dt / (2.0 * kPi) * (1.0 + base - std::log(0.25 * k * dt * s));
    return dt / (2.0 * kPi) * (base - std::log(k * dt * s / (4.0 * kPi)));
}

OperatorPair assemble(const RoughSurface& s, cdouble k, DiagonalRule rule)
{
    check_surface(s);
    check_wavenumber(k);
    const int m = s.size();
    const double dt = s.dt;
    OperatorPair out{CMatrix(m, m), CMatrix(m, m)};
    CMatrix& a = out.A;
    CMatrix& b = out.B;
    bool nodes_distinct = true;
#pragma omp parallel for schedule(dynamic, 16) reduction(&& : nodes_distinct)
    for (int i = 0; i < m; ++i) {
        a(i, i) = diagonal_a(dt, s.h1[i], s.h2[i]);
        b(i, i) = diagonal_b(k, dt, s.h1[i], rule);
        for (int j = i + 1; j < m; ++j) {
            double dx = s.t[j] - s.t[i];
            double dz = s.h[j] - s.h[i];
            double r = std::hypot(dx, dz);
            if (!(r > 0.0)) {
                nodes_distinct = false;
                continue;
            }
            cdouble h0, h1;
            hankel1_01(k * r, h0, h1);
            cdouble c = -0.25 * I * k * dt * h1 / r;
            a(i, j) = c * (dz - s.h1[j] * dx);
            a(j, i) = c * (-dz + s.h1[i] * dx);
            b(i, j) = b(j, i) = 0.25 * I * dt * h0;
        }
    }
    if (!nodes_distinct || !a.allFinite() || !b.allFinite())
        throw NumericalError("bie: non-finite kernel values");
    return out;
}

void assemble_block(const RoughSurface& s, const Wavenumbers& k, DiagonalRule rule, CMatrix& out)
{
    check_surface(s);
    check_wavenumber(k.k0);
    check_wavenumber(k.k1);
    const int m = s.size();
    const double dt = s.dt;
    out.resize(2 * m, 2 * m);
    const cdouble ks[2] = {cdouble(k.k0, 0.0), k.k1};
    bool finite = true;
#pragma omp parallel for schedule(dynamic, 16) reduction(&& : finite)
    for (int i = 0; i < m; ++i) {
        const double a_ii = diagonal_a(dt, s.h1[i], s.h2[i]);
        out(i, i) = 0.5 - a_ii;
        out(m + i, i) = 0.5 + a_ii;
        out(i, m + i) = diagonal_b(ks[0], dt, s.h1[i], rule);
        out(m + i, m + i) = -diagonal_b(ks[1], dt, s.h1[i], rule);
        for (int j = i + 1; j < m; ++j) {
            double dx = s.t[j] - s.t[i];
            double dz = s.h[j] - s.h[i];
            double r = std::hypot(dx, dz);
            if (!(r > 0.0)) {
                finite = false;
                continue;
            }
            double bij = dz - s.h1[j] * dx;
            double bji = -dz + s.h1[i] * dx;
            for (int layer = 0; layer < 2; ++layer) {
                cdouble h0, h1;
                hankel1_01(ks[layer] * r, h0, h1);
                cdouble c = -0.25 * I * ks[layer] * dt * h1 / r;
                cdouble g = 0.25 * I * dt * h0;
                finite = finite && std::isfinite(std::abs(c)) && std::isfinite(std::abs(g));
                if (layer == 0) {
                    out(i, j) = -c * bij;
                    out(j, i) = -c * bji;
                    out(i, m + j) = out(j, m + i) = g;
                } else {
                    out(m + i, j) = c * bij;
                    out(m + j, i) = c * bji;
                    out(m + i, m + j) = out(m + j, m + i) = -g;
                }
            }
        }
    }
    if (!finite)
        throw NumericalError("bie: non-finite kernel values");
}

BieSystem::BieSystem(const RoughSurface& surface, const Wavenumbers& k, const BieOptions& options)
    : surface_(surface), k_(k), options_(options)
{
    assemble_block(surface_, k_, options_.diagonal, lu_);
    const lapack_int n = static_cast<lapack_int>(lu_.rows());
    double anorm = lu_.cwiseAbs().colwise().sum().maxCoeff();
    pivots_.resize(n);
    lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, pivots_.data());
    if (info > 0)
        throw NumericalError("bie: block matrix is singular");
    if (info < 0)
        throw NumericalError("bie: zgetrf argument error");
    info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, lu_.data(), n, anorm, &rcond_);
    if (info != 0)
        throw NumericalError("bie: condition estimate failed");
    if (!(rcond_ >= options_.min_rcond))
        throw NumericalError("bie: ill-conditioned block matrix, rcond = " + std::to_string(rcond_));
}

CMatrix BieSystem::block_matrix() const
{
    CMatrix a;
    assemble_block(surface_, k_, options_.diagonal, a);
    return a;
}

CMatrix BieSystem::solve_rhs(const CMatrix& rhs) const
{
    if (rhs.rows() != lu_.rows())
        throw ConfigError("bie: right-hand side has the wrong length");
    CMatrix x = rhs;
    const lapack_int n = static_cast<lapack_int>(lu_.rows());
    lapack_int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, static_cast<lapack_int>(x.cols()), lu_.data(), n,
                                     pivots_.data(), x.data(), n);
    if (info != 0)
        throw NumericalError("bie: zgetrs failed");
    return x;
}

CVector BieSystem::solve_rhs(const CVector& rhs) const
{
    CMatrix x = solve_rhs(CMatrix(rhs));
    return x.col(0);
}

CVector BieSystem::source_rhs(Side side, Point src, cdouble amplitude) const
{
    const RoughSurface& s = surface_;
    const int m = s.size();
    if (side == Side::Above && !(src.z > s.max_height()))
        throw ConfigError("bie: source must lie strictly above the surface");
    if (side == Side::Below && !(src.z < s.min_height()))
        throw ConfigError("bie: source must lie strictly below the surface");
    CVector rhs = CVector::Zero(2 * m);
    const cdouble k = side == Side::Above ? cdouble(k_.k0, 0.0) : k_.k1;
    const int offset = side == Side::Above ? 0 : m;
    if (amplitude == 0.0)
        return rhs;
    for (int i = 0; i < m; ++i)
        rhs(offset + i) = amplitude * green(k, Point{s.t[i], s.h[i]}, src);
    return rhs;
}

SurfaceFieldSolution BieSystem::solve(Side side, Point source, cdouble amplitude) const
{
    CVector x = solve_rhs(source_rhs(side, source, amplitude));
    const int m = surface_.size();
    return SurfaceFieldSolution{x.head(m), x.tail(m), side, source, k_};
}

std::vector<SurfaceFieldSolution> BieSystem::solve(Side side, const std::vector<Point>& sources) const
{
    const int m = surface_.size();
    CMatrix rhs(2 * m, static_cast<Eigen::Index>(sources.size()));
    for (std::size_t q = 0; q < sources.size(); ++q)
        rhs.col(static_cast<Eigen::Index>(q)) = source_rhs(side, sources[q], 1.0);
    CMatrix x = solve_rhs(rhs);
    std::vector<SurfaceFieldSolution> out;
    out.reserve(sources.size());
    for (std::size_t q = 0; q < sources.size(); ++q) {
        auto c = x.col(static_cast<Eigen::Index>(q));
        out.push_back(SurfaceFieldSolution{c.head(m), c.tail(m), side, sources[q], k_});
    }
    return out;
}

SurfaceFieldSolution BieSystem::solve_incident(const std::function<cdouble(double, double)>& incident) const
{
    const RoughSurface& s = surface_;
    const int m = s.size();
    CVector rhs = CVector::Zero(2 * m);
    for (int i = 0; i < m; ++i)
        rhs(i) = incident(s.t[i], s.h[i]);
    CVector x = solve_rhs(rhs);
    return SurfaceFieldSolution{x.head(m), x.tail(m), Side::Above, Point{0.0, INFINITY}, k_};
}

cdouble eval_above(const SurfaceFieldSolution& sol, const RoughSurface& s, Point p)
{
    if (sol.U.size() != s.size() || sol.V.size() != s.size())
        throw ConfigError("bie: solution does not match surface");
    check_evaluation_point(s, p, Side::Above);
    const cdouble k = sol.k.k0;
    cdouble sum = 0.0;
    for (int j = 0; j < s.size(); ++j) {
        double dx = s.t[j] - p.x;
        double dz = s.h[j] - p.z;
        double r = std::hypot(dx, dz);
        cdouble h0, h1;
        hankel1_01(k * r, h0, h1);
        cdouble kern = -0.25 * I * k * h1 / r * (dz - s.h1[j] * dx);
        sum += kern * sol.U(j) - 0.25 * I * h0 * sol.V(j);
    }
    return s.dt * sum;
}

cdouble eval_below(const SurfaceFieldSolution& sol, const RoughSurface& s, Point p)
{
    if (sol.U.size() != s.size() || sol.V.size() != s.size())
        throw ConfigError("bie: solution does not match surface");
    check_evaluation_point(s, p, Side::Below);
    const cdouble k = sol.k.k1;
    cdouble sum = 0.0;
    for (int j = 0; j < s.size(); ++j) {
        double dx = s.t[j] - p.x;
        double dz = s.h[j] - p.z;
        double r = std::hypot(dx, dz);
        cdouble h0, h1;
        hankel1_01(k * r, h0, h1);
        cdouble kern = -0.25 * I * k * h1 / r * (dz - s.h1[j] * dx);
        sum += -kern * sol.U(j) + 0.25 * I * h0 * sol.V(j);
    }
    return s.dt * sum;
}

cdouble TaperedBeam::operator()(double x, double z) const
{
    const double c = std::cos(theta_i), t = std::tan(theta_i);
    const double u = x + z * t;
    const double kgc = k * g * c;
    const double w = (2.0 * u * u / (g * g) - 1.0) / (kgc * kgc);
    return std::exp(I * k * (x * std::sin(theta_i) - z * c) * (1.0 + w)) * std::exp(-u * u / (g * g));
}

double TaperedBeam::incident_power() const
{
    const double c = std::cos(theta_i), t = std::tan(theta_i);
    return g * std::sqrt(kPi / 2.0) * c * (1.0 - (1.0 + 2.0 * t * t) / (2.0 * k * k * g * g * c * c));
}

void validate_taper(const TaperedBeam& beam, double domain_len)
{
    if (!(std::abs(beam.theta_i) < 0.5 * kPi))
        throw ConfigError("bistatic: incidence angle must lie in (-90, 90) degrees");
    if (!(beam.g > 0.0) || beam.g > 0.25 * domain_len * (1.0 + 1e-12))
        throw ConfigError("bistatic: taper too wide for the surface length");
    const double kgc = beam.k * beam.g * std::cos(beam.theta_i);
    if (kgc < 10.0 || beam.incident_power() <= 0.5 * beam.g * std::sqrt(kPi / 2.0) * std::cos(beam.theta_i))
        throw ConfigError("bistatic: taper too narrow for the wavelength");
}

cdouble far_field_above(const SurfaceFieldSolution& sol, const RoughSurface& s, double theta)
{
    const double k = sol.k.k0;
    const double sn = std::sin(theta), cs = std::cos(theta);
    cdouble sum = 0.0;
    for (int j = 0; j < s.size(); ++j) {
        cdouble e = std::exp(-I * k * (s.t[j] * sn + s.h[j] * cs));
        sum += (-I * k * (cs - s.h1[j] * sn) * sol.U(j) - sol.V(j)) * e;
    }
    return s.dt * sum;
}

cdouble far_field_below(const SurfaceFieldSolution& sol, const RoughSurface& s, double theta)
{
    const cdouble k = sol.k.k1;
    const double sn = std::sin(theta), cs = std::cos(theta);
    cdouble sum = 0.0;
    for (int j = 0; j < s.size(); ++j) {
        cdouble e = std::exp(-I * k * (s.t[j] * sn - s.h[j] * cs));
        sum += (-I * k * (cs + s.h1[j] * sn) * sol.U(j) + sol.V(j)) * e;
    }
    return s.dt * sum;
}

std::vector<double> bistatic_sigma(const BieSystem& system, const TaperedBeam& beam, const std::vector<double>& theta_s)
{
    validate_taper(beam, system.surface().domain_len);
    SurfaceFieldSolution sol = system.solve_incident([&beam](double x, double z) { return beam(x, z); });
    const double norm = 8.0 * kPi * beam.k * beam.incident_power();
    std::vector<double> out;
    out.reserve(theta_s.size());
    for (double th : theta_s)
        out.push_back(std::norm(far_field_above(sol, system.surface(), th)) / norm);
    return out;
}

PowerBalance power_balance(const BieSystem& system, const TaperedBeam& beam, int n_angles)
{
    validate_taper(beam, system.surface().domain_len);
    if (system.wavenumbers().k1.imag() != 0.0)
        throw ConfigError("power balance requires a lossless lower medium");
    if (n_angles < 3)
        throw ConfigError("power balance: too few angles");
    SurfaceFieldSolution sol = system.solve_incident([&beam](double x, double z) { return beam(x, z); });
    const double norm = 8.0 * kPi * beam.k * beam.incident_power();
    const double step = kPi / (n_angles - 1);
    PowerBalance pb;
    for (int q = 0; q < n_angles; ++q) {
        double th = -0.5 * kPi + q * step;
        double w = (q == 0 || q == n_angles - 1) ? 0.5 * step : step;
        pb.reflected += w * std::norm(far_field_above(sol, system.surface(), th)) / norm;
        pb.transmitted += w * std::norm(far_field_below(sol, system.surface(), th)) / norm;
    }
    return pb;
}

BistaticResult bistatic_xs(const BistaticSpec& spec)
{
    validate(spec.surface);
    validate(spec.medium);
    if (spec.n_realizations < 1)
        throw ConfigError("bistatic: need at least one realization");
    if (!(spec.freq_hz > 0.0))
        throw ConfigError("bistatic: frequency must be positive");
    if (spec.theta_s_deg.empty())
        throw ConfigError("bistatic: empty scattering-angle grid");
    const Wavenumbers k = wavenumbers(2.0 * kPi * spec.freq_hz, spec.medium);
    TaperedBeam beam{k.k0, spec.theta_i_deg * kPi / 180.0,
                     spec.taper_g > 0.0 ? spec.taper_g : 0.25 * spec.surface.domain_len};
    validate_taper(beam, spec.surface.domain_len);

    std::vector<double> theta(spec.theta_s_deg.size());
    for (std::size_t q = 0; q < theta.size(); ++q)
        theta[q] = spec.theta_s_deg[q] * kPi / 180.0;

    BistaticResult res;
    res.theta_s_deg = spec.theta_s_deg;
    res.sigma_mean.assign(theta.size(), 0.0);
    for (int r = 0; r < spec.n_realizations; ++r) {
        SurfaceSpec ss = spec.surface;
        ss.seed = spec.surface.seed + static_cast<std::uint64_t>(r);
        RoughSurface surf = generate_surface(ss);
        BieSystem sys(surf, k, BieOptions{spec.diagonal});
        std::vector<double> sigma = bistatic_sigma(sys, beam, theta);
        double frac = 0.0;
        for (std::size_t q = 0; q < theta.size(); ++q) {
            res.sigma_mean[q] += sigma[q] / spec.n_realizations;
            if (q > 0)
                frac += 0.5 * (sigma[q] + sigma[q - 1]) * (theta[q] - theta[q - 1]);
        }
        res.reflected_fraction.push_back(frac);
    }
    return res;
}

}  // namespace roughsar
