#include "roughsar/kernels.hpp"

#include <array>
#include <cmath>

namespace roughsar {

namespace {

constexpr cdouble I(0.0, 1.0);
constexpr double kSeriesRadius = 5.0;
constexpr double kSeriesMaxImag = 3.0;
constexpr double kAsymptoticRadius = 25.0;

// Ascending series with the logarithmic terms of Y0, Y1.
void series01(cdouble z, cdouble& h0, cdouble& h1)
{
    const cdouble q = -0.25 * z * z;
    cdouble term0 = 1.0;   // q^k / (k!)^2
    cdouble term1 = 1.0;   // q^k / (k! (k+1)!)
    cdouble j0 = 0.0, j1 = 0.0, s0 = 0.0, s1 = 0.0;
    double harmonic = 0.0;  // H_k
    for (int k = 0; k < 60; ++k) {
        double hk1 = harmonic + 1.0 / (k + 1);
        j0 += term0;
        j1 += term1;
        s0 += harmonic * term0;
        // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma; the gamma part lives in lg.
        s1 += (harmonic + hk1) * term1;
        if (k > 2 && std::abs(term0) < 1e-18 * std::abs(j0) && std::abs(term1) < 1e-18 * std::abs(j1))
            break;
        harmonic = hk1;
        term0 *= q / double((k + 1) * (k + 1));
        term1 *= q / double((k + 1) * (k + 2));
    }
    const cdouble half = 0.5 * z;
    j1 *= half;
    const cdouble lg = std::log(half) + kEulerGamma;
    cdouble y0 = (2.0 / kPi) * (lg * j0 - s0);
    cdouble y1 = (2.0 / kPi) * (lg * j1) - 2.0 / (kPi * z) - half * s1 / kPi;
    h0 = j0 + I * y0;
    h1 = j1 + I * y1;
}

// Laplace-type integral sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} / Gamma(nu + 1/2)
// * int e^{-v^2} v^{2 nu} (1 + i v^2 / (2z))^{nu - 1/2} dv over the real line, by trapezoid.
void integral01(cdouble z, cdouble& h0, cdouble& h1)
{
    constexpr double step = 0.2;
    constexpr int n = 33;  // v up to 6.6
    cdouble i0 = 0.5, i1 = 0.0;
    const cdouble c = I / (2.0 * z);
    for (int j = 1; j <= n; ++j) {
        double v = j * step;
        double v2 = v * v;
        double g = std::exp(-v2);
        cdouble s = std::sqrt(1.0 + c * v2);
        i0 += g / s;
        i1 += g * v2 * s;
    }
    i0 *= 2.0 * step;
    i1 *= 2.0 * step;
    const cdouble pre = std::sqrt(2.0 / (kPi * z)) / std::sqrt(kPi);
    const cdouble e = std::exp(I * (z - 0.25 * kPi));
    h0 = pre * e * i0;
    h1 = pre * e * (-I) * i1 * 2.0;
}

void asymptotic01(cdouble z, cdouble& h0, cdouble& h1)
{
    const cdouble iz = I / z;
    cdouble t0 = 1.0, t1 = 1.0, s0 = 1.0, s1 = 1.0;
    for (int k = 1; k < 40; ++k) {
        double odd = 2.0 * k - 1.0;
        t0 *= iz * ((0.0 - odd * odd) / (8.0 * k));
        t1 *= iz * ((4.0 - odd * odd) / (8.0 * k));
        s0 += t0;
        s1 += t1;
        if (std::abs(t0) < 1e-17 && std::abs(t1) < 1e-17)
            break;
    }
    const cdouble pre = std::sqrt(2.0 / (kPi * z));
    const cdouble e = std::exp(I * (z - 0.25 * kPi));
    h0 = pre * e * s0;
    h1 = pre * e * (-I) * s1;
}

}  // namespace

void validate(const Medium& medium)
{
    if (!(medium.eps_r >= 1.0))
        throw ConfigError("medium: eps_r must be >= 1");
    if (!(medium.beta >= 0.0))
        throw ConfigError("medium: beta must be >= 0");
    if (!(medium.c > 0.0))
        throw ConfigError("medium: c must be positive");
}

Wavenumbers wavenumbers(double omega, const Medium& medium)
{
    Wavenumbers w;
    w.k0 = omega / medium.c;
    if (medium.beta == 0.0)
        w.k1 = w.k0 * std::sqrt(medium.eps_r);
    else
        w.k1 = w.k0 * std::sqrt(cdouble(medium.eps_r, medium.eps_r * medium.beta));
    return w;
}

void hankel1_01(cdouble z, cdouble& h0, cdouble& h1)
{
    const double r = std::abs(z);
    if (r == 0.0)
        throw std::domain_error("hankel: singular at z = 0");
    if (z.imag() < 0.0)
        throw std::domain_error("hankel: argument in the lower half-plane");
    if (r >= kAsymptoticRadius)
        asymptotic01(z, h0, h1);
    else if (r <= kSeriesRadius && z.imag() <= kSeriesMaxImag)
        series01(z, h0, h1);
    else
        integral01(z, h0, h1);
}

cdouble hankel1_0(cdouble z)
{
    cdouble h0, h1;
    hankel1_01(z, h0, h1);
    return h0;
}

cdouble hankel1_1(cdouble z)
{
    cdouble h0, h1;
    hankel1_01(z, h0, h1);
    return h1;
}

cdouble green(cdouble k, Point p, Point q)
{
    double r = std::hypot(p.x - q.x, p.z - q.z);
    if (r == 0.0)
        throw std::domain_error("green: coincident points");
    return 0.25 * I * hankel1_0(k * r);
}

cdouble green_dn(cdouble k, Point p, double xi, double zeta, double slope)
{
    double dx = xi - p.x;
    double dz = zeta - p.z;
    double r = std::hypot(dx, dz);
    if (r == 0.0)
        throw std::domain_error("green_dn: coincident points");
    return -0.25 * I * k * hankel1_1(k * r) / r * (dz - slope * dx);
}

cdouble green_dn(cdouble k, const RoughSurface& surface, int i_eval, int j_src)
{
    if (i_eval == j_src)
        throw std::domain_error("green_dn: coincident nodes");
    Point p{surface.t[i_eval], surface.h[i_eval]};
    return green_dn(k, p, surface.t[j_src], surface.h[j_src], surface.h1[j_src]);
}

}  // namespace roughsar
