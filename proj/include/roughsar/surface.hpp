#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughsar/types.hpp"

namespace roughsar {

struct SurfaceSpec {
    double h_rms = 0.002;
    double corr_len = 0.08;
    double domain_len = 4.0;
    int n_points = 2048;
    std::uint64_t seed = 0;
};

// One periodic realization sampled at t_j = -L/2 + j*dt, with spectral derivatives.
struct RoughSurface {
    double domain_len = 0.0;
    double dt = 0.0;
    std::vector<double> t, h, h1, h2;

    int size() const { return static_cast<int>(t.size()); }
    double max_height() const;
    double min_height() const;
    // Periodic linear interpolation between nodes.
    double height_at(double x) const;

    static RoughSurface flat(double domain_len, int n_points);
};

void validate(const SurfaceSpec& spec);

RoughSurface generate_surface(const SurfaceSpec& spec);

struct SurfaceStats {
    double rms = 0.0;
    double corr_len_est = 0.0;  // NaN when the pooled variance vanishes
};

SurfaceStats surface_stats(const std::vector<RoughSurface>& surfaces);

// Gaussian roughness power spectrum W(k), normalized so its integral over k is h_rms^2.
double gaussian_spectrum(double k, double h_rms, double corr_len);

void write_surface_csv(const std::string& path, const RoughSurface& s);
RoughSurface read_surface_csv(const std::string& path);

}  // namespace roughsar
