#include "roughsar/forward.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace roughsar {

std::string role_name(Role r)
{
    switch (r) {
    case Role::R: return "R";
    case Role::S: return "S";
    case Role::Eta: return "eta";
    case Role::D: return "D";
    case Role::DTilde: return "D_tilde";
    }
    return "?";
}

Role role_from_name(const std::string& name)
{
    if (name == "R") return Role::R;
    if (name == "S") return Role::S;
    if (name == "eta") return Role::Eta;
    if (name == "D") return Role::D;
    if (name == "D_tilde") return Role::DTilde;
    throw ConfigError("unknown data-matrix role '" + name + "'");
}

Acquisition Acquisition::uniform(double f_min_hz, double f_max_hz, int n_freqs, int n_positions, double aperture,
                                 double altitude, const Medium& medium)
{
    if (n_freqs < 2 || n_positions < 2)
        throw ConfigError("acquisition: need at least 2 frequencies and 2 positions");
    Acquisition a;
    a.medium = medium;
    a.aperture = aperture;
    a.altitude = altitude;
    for (int m = 0; m < n_freqs; ++m)
        a.freqs_hz.push_back(f_min_hz + (f_max_hz - f_min_hz) * m / (n_freqs - 1));
    for (int n = 0; n < n_positions; ++n)
        a.positions.push_back({-0.5 * aperture + aperture * n / (n_positions - 1), altitude});
    validate(a);
    return a;
}

void validate(const Acquisition& acq)
{
    validate(acq.medium);
    if (acq.n_freqs() < 2 || acq.n_positions() < 2)
        throw ConfigError("acquisition: need at least 2 frequencies and 2 positions");
    for (int m = 0; m < acq.n_freqs(); ++m) {
        if (!(acq.freqs_hz[m] > 0.0))
            throw ConfigError("acquisition: frequencies must be positive");
        if (m > 0 && !(acq.freqs_hz[m] > acq.freqs_hz[m - 1]))
            throw ConfigError("acquisition: frequencies must be strictly increasing");
    }
}

ForwardResult simulate(const RoughSurface& surface, const Acquisition& acq, const std::vector<PointTarget>& targets,
                       const ForwardOptions& options)
{
    validate(acq);
    for (const auto& p : acq.positions)
        if (!(p.z > surface.max_height()))
            throw ConfigError("forward: platform position below the surface");
    for (const auto& t : targets) {
        if (!(t.pos.z < surface.min_height()))
            throw ConfigError("forward: target must lie below the surface");
        if (t.rho == 0.0)
            throw ConfigError("forward: target reflectivity must be non-zero");
    }
    const int mf = acq.n_freqs(), nn = acq.n_positions(), nt = static_cast<int>(targets.size());
    ForwardResult res;
    res.R = DataMatrix{CMatrix::Zero(mf, nn), Role::R};
    res.S = DataMatrix{CMatrix::Zero(mf, nn), Role::S};
    res.S_per_target.assign(nt, DataMatrix{CMatrix::Zero(mf, nn), Role::S});
    res.rcond.resize(mf);

    std::vector<Point> target_pos;
    for (const auto& t : targets)
        target_pos.push_back(t.pos);

    for (int m = 0; m < mf; ++m) {
        const Wavenumbers k = wavenumbers(acq.omega(m), acq.medium);
        BieSystem sys(surface, k, options.bie);
        res.rcond[m] = sys.rcond();

        std::vector<SurfaceFieldSolution> down = sys.solve(Side::Above, acq.positions);
        std::vector<SurfaceFieldSolution> up;
        if (nt > 0)
            up = sys.solve(Side::Below, target_pos);

        for (int n = 0; n < nn; ++n) {
            if (options.compute_ground_bounce)
                res.R.values(m, n) = eval_above(down[n], surface, acq.positions[n]);
            for (int t = 0; t < nt; ++t) {
                cdouble incident = eval_below(down[n], surface, targets[t].pos);
                cdouble outgoing = eval_above(up[t], surface, acq.positions[n]);
                cdouble v = outgoing * targets[t].rho * incident;
                res.S_per_target[t].values(m, n) = v;
                res.S.values(m, n) += v;
            }
        }
        if (options.on_frequency)
            options.on_frequency(m, res.rcond[m]);
    }
    return res;
}

DataMatrix ground_bounce(const RoughSurface& surface, const Acquisition& acq, const ForwardOptions& options)
{
    ForwardOptions o = options;
    o.compute_ground_bounce = true;
    return simulate(surface, acq, {}, o).R;
}

DataMatrix scattered(const RoughSurface& surface, const Acquisition& acq, const std::vector<PointTarget>& targets,
                     const ForwardOptions& options)
{
    ForwardOptions o = options;
    o.compute_ground_bounce = false;
    return simulate(surface, acq, targets, o).S;
}

NoisyData add_noise(const DataMatrix& R, const DataMatrix& S, double snr_db, std::uint64_t seed)
{
    if (R.values.rows() != S.values.rows() || R.values.cols() != S.values.cols())
        throw ConfigError("add_noise: R and S dimensions differ");
    if (std::isnan(snr_db))
        throw ConfigError("add_noise: SNR is NaN");
    const CMatrix clean = R.values + S.values;
    const double clean_norm = clean.norm();
    NoisyData out;
    out.eta = DataMatrix{CMatrix::Zero(clean.rows(), clean.cols()), Role::Eta};
    if (std::isinf(snr_db) && snr_db > 0.0) {
        out.D = DataMatrix{clean, Role::D};
        out.snr_db = snr_db;
        out.esnr_db = std::numeric_limits<double>::infinity();
        out.esnr_ratio_db = out.esnr_db;
        return out;
    }
    if (clean_norm == 0.0)
        throw NumericalError("add_noise: SNR unrealizable for R + S = 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix eta(clean.rows(), clean.cols());
    for (Eigen::Index n = 0; n < eta.cols(); ++n)
        for (Eigen::Index m = 0; m < eta.rows(); ++m) {
            double a = normal(rng);
            double b = normal(rng);
            eta(m, n) = cdouble(a, b) / std::sqrt(2.0);
        }
    // SNR is defined on the ratio of norms, not of squared norms.
    const double target = clean_norm / std::pow(10.0, snr_db / 10.0);
    eta *= target / eta.norm();

    out.eta.values = eta;
    out.D = DataMatrix{clean + eta, Role::D};
    out.snr_db = 10.0 * std::log10(clean_norm / eta.norm());
    out.esnr_db = 10.0 * std::log10(S.values.squaredNorm() / eta.squaredNorm());
    out.esnr_ratio_db = 10.0 * std::log10(S.values.norm() / eta.norm());
    return out;
}

}  // namespace roughsar
