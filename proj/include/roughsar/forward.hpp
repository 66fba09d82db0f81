#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughsar/bie.hpp"
#include "roughsar/kernels.hpp"
#include "roughsar/surface.hpp"
#include "roughsar/types.hpp"

namespace roughsar {

struct Acquisition {
    std::vector<double> freqs_hz;
    std::vector<Point> positions;
    Medium medium;
    double aperture = 1.0;
    double altitude = 1.0;

    int n_freqs() const { return static_cast<int>(freqs_hz.size()); }
    int n_positions() const { return static_cast<int>(positions.size()); }
    double omega(int m) const { return 2.0 * kPi * freqs_hz[m]; }

    // Uniform band [f_min, f_max] and positions x_n evenly spread over [-a/2, a/2] at the given altitude.
    static Acquisition uniform(double f_min_hz, double f_max_hz, int n_freqs, int n_positions, double aperture,
                               double altitude, const Medium& medium);
};

void validate(const Acquisition& acq);

struct PointTarget {
    Point pos;
    cdouble rho;
};

enum class Role { R, S, Eta, D, DTilde };

std::string role_name(Role r);
Role role_from_name(const std::string& name);

struct DataMatrix {
    CMatrix values;  // n_freqs x n_positions
    Role role = Role::D;
};

struct ForwardOptions {
    BieOptions bie;
    bool compute_ground_bounce = true;
    // Per-frequency progress callback (frequency index, rcond).
    std::function<void(int, double)> on_frequency;
};

struct ForwardResult {
    DataMatrix R;
    std::vector<DataMatrix> S_per_target;
    DataMatrix S;
    std::vector<double> rcond;
};

// One factorization per frequency shared by the ground bounce and every target.
ForwardResult simulate(const RoughSurface& surface, const Acquisition& acq, const std::vector<PointTarget>& targets,
                       const ForwardOptions& options = {});

DataMatrix ground_bounce(const RoughSurface& surface, const Acquisition& acq, const ForwardOptions& options = {});
DataMatrix scattered(const RoughSurface& surface, const Acquisition& acq, const std::vector<PointTarget>& targets,
                     const ForwardOptions& options = {});

struct NoisyData {
    DataMatrix D;
    DataMatrix eta;
    double snr_db = 0.0;   // realized, 10 log10(|R+S| / |eta|)
    double esnr_db = 0.0;        // 10 log10(|S|^2 / |eta|^2)
    double esnr_ratio_db = 0.0;  // 10 log10(|S| / |eta|), same norm convention as snr_db
};

// snr_db = +inf gives eta = 0.
NoisyData add_noise(const DataMatrix& R, const DataMatrix& S, double snr_db, std::uint64_t seed);

}  // namespace roughsar
