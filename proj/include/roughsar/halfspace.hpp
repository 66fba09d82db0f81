#pragma once

#include <functional>
#include <string>
#include <vector>

#include "roughsar/grid.hpp"
#include "roughsar/types.hpp"

namespace roughsar {

struct ContourSpec {
    double A = 0.4;
    double w = 6.0;
    int n_quad = 500;
    double s_max = 0.0;  // in units of k0; 0 selects the automatic truncation
    bool sinh_map = true;
};

void validate(const ContourSpec& c);

// Spectral weight f(xi, q0, q1) in physical units.
using SpectralWeight = std::function<cdouble(cdouble xi, cdouble q0, cdouble q1)>;

// Deformed-contour nodes in physical units, with quadrature weights that already include
// dxi/ds, the sinh Jacobian and the 1/(q0 + q1) factor.
struct SommerfeldContour {
    double k0 = 0.0;
    double eps_r = 1.0;
    std::vector<cdouble> xi, q0, q1, weight;

    SommerfeldContour(double k0, double eps_r, double s_max, const ContourSpec& spec);
    int size() const { return static_cast<int>(xi.size()); }
};

// Truncation (in units of k0) for decay lengths beta1, beta2.
double default_s_max(double k0, double eps_r, double beta1, double beta2);

// int f(xi) exp(i beta1 q0 + i beta2 q1 + i xi gamma) / (q0 + q1) dxi along the deformed contour.
cdouble sommerfeld(double k0, double eps_r, double beta1, double beta2, double gamma, const SpectralWeight& f,
                   const ContourSpec& contour = {});

// u^(0): field below the flat interface z = 0 due to a unit source above it.
cdouble field_down(double omega, Point platform, Point image, double eps_r, const ContourSpec& contour = {},
                   double c = kSpeedOfLight);

// u^(1): field above the interface due to a unit source below it.
cdouble field_up(double omega, Point image, Point platform, double eps_r, const ContourSpec& contour = {},
                 double c = kSpeedOfLight);

// Field reflected by the flat interface, both points above it.
cdouble reflected_field(double omega, Point source, Point receiver, double eps_r, const ContourSpec& contour = {},
                        double c = kSpeedOfLight);

// a_mn = (u0/|u0|)(u1/|u1|).
cdouble illumination(double omega, Point platform, Point image, double eps_r, const ContourSpec& contour = {},
                     double c = kSpeedOfLight);

class IlluminationCache {
public:
    IlluminationCache() = default;

    static IlluminationCache build(const std::vector<double>& freqs_hz, const std::vector<Point>& positions,
                                   const GridAxes& grid, double eps_r, const ContourSpec& contour = {},
                                   double c = kSpeedOfLight);

    int n_freqs() const { return n_freqs_; }
    int n_positions() const { return n_positions_; }
    int n_points() const { return n_points_; }
    const GridAxes& grid() const { return grid_; }
    double eps_r() const { return eps_r_; }
    const std::string& acquisition_hash() const { return acquisition_hash_; }

    cdouble at(int m, int n, int p) const { return data_[(static_cast<std::size_t>(m) * n_positions_ + n) * n_points_ + p]; }
    const std::vector<cdouble>& data() const { return data_; }

    // Header line of JSON, then row-major (m, n, p) little-endian float64 (re, im) pairs.
    void save(const std::string& path) const;
    static IlluminationCache load(const std::string& path);

private:
    int n_freqs_ = 0, n_positions_ = 0, n_points_ = 0;
    GridAxes grid_;
    double eps_r_ = 1.0;
    std::string acquisition_hash_;
    std::vector<cdouble> data_;
};

std::string acquisition_fingerprint(const std::vector<double>& freqs_hz, const std::vector<Point>& positions,
                                      const GridAxes& grid, double eps_r);

}  // namespace roughsar
