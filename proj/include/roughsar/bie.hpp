#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "roughsar/kernels.hpp"
#include "roughsar/surface.hpp"
#include "roughsar/types.hpp"

namespace roughsar {

// Diagonal weight of the single-layer matrix B.
//   CellAverage:  (dt/2pi)[1 - gamma + i pi/2 - log(k dt s / 4)]
//   LogCorrected: (dt/2pi)[  - gamma + i pi/2 - log(k dt s / (4 pi))]
// with s = sqrt(1 + h'^2). LogCorrected adds the zeta-function correction of the trapezoid rule
// for the logarithmic singularity and converges at O(dt^2) instead of O(dt).
enum class DiagonalRule { LogCorrected, CellAverage };

struct BieOptions {
    DiagonalRule diagonal = DiagonalRule::LogCorrected;
    double min_rcond = 1e-13;
};

struct OperatorPair {
    CMatrix A, B;
};

// Nystrom matrices of the double-layer (A) and single-layer (B) operators for wavenumber k.
OperatorPair assemble(const RoughSurface& surface, cdouble k, DiagonalRule rule = DiagonalRule::LogCorrected);

cdouble diagonal_b(cdouble k, double dt, double slope, DiagonalRule rule);
double diagonal_a(double dt, double slope, double curvature);

enum class Side { Above, Below };

struct SurfaceFieldSolution {
    CVector U, V;
    Side source_side = Side::Above;
    Point source_pos;
    Wavenumbers k;
};

// Block system [[I/2 - A0, B0], [I/2 + A1, -B1]] for one surface and frequency, LU-factorized once.
class BieSystem {
public:
    BieSystem(const RoughSurface& surface, const Wavenumbers& k, const BieOptions& options = {});

    const RoughSurface& surface() const { return surface_; }
    const Wavenumbers& wavenumbers() const { return k_; }
    int n_nodes() const { return surface_.size(); }
    // Reciprocal 1-norm condition estimate of the block matrix.
    double rcond() const { return rcond_; }

    CMatrix block_matrix() const;
    CVector solve_rhs(const CVector& rhs) const;
    CMatrix solve_rhs(const CMatrix& rhs) const;

    SurfaceFieldSolution solve(Side side, Point source, cdouble amplitude = 1.0) const;
    std::vector<SurfaceFieldSolution> solve(Side side, const std::vector<Point>& sources) const;
    // Incident field from above given pointwise, e.g. a tapered beam.
    SurfaceFieldSolution solve_incident(const std::function<cdouble(double, double)>& incident) const;

private:
    RoughSurface surface_;
    Wavenumbers k_;
    BieOptions options_;
    CMatrix lu_;
    std::vector<std::int32_t> pivots_;
    double rcond_ = 0.0;

    CVector source_rhs(Side side, Point source, cdouble amplitude) const;
};

void assemble_block(const RoughSurface& surface, const Wavenumbers& k, DiagonalRule rule, CMatrix& out);

// Scattered field D0[U] - S0[V] above the surface (incident term excluded).
cdouble eval_above(const SurfaceFieldSolution& sol, const RoughSurface& surface, Point p);
// Transmitted field -D1[U] + S1[V] below the surface.
cdouble eval_below(const SurfaceFieldSolution& sol, const RoughSurface& surface, Point p);

// Thorsos tapered plane wave, incidence direction (sin ti, -cos ti).
struct TaperedBeam {
    double k = 0.0;
    double theta_i = 0.0;  // rad
    double g = 0.0;        // taper width (m)

    cdouble operator()(double x, double z) const;
    // Power crossing a horizontal line, normalized by k.
    double incident_power() const;
};

void validate_taper(const TaperedBeam& beam, double domain_len);

// Far-field amplitudes psi(theta) with u ~ C(r) psi(theta); |C(r)|^2 = 1/(8 pi k r).
cdouble far_field_above(const SurfaceFieldSolution& sol, const RoughSurface& surface, double theta_s);
cdouble far_field_below(const SurfaceFieldSolution& sol, const RoughSurface& surface, double theta_t);

struct PowerBalance {
    double reflected = 0.0;
    double transmitted = 0.0;
};

// Far-field power fractions for a tapered beam on a lossless interface, integrated over n_angles.
PowerBalance power_balance(const BieSystem& system, const TaperedBeam& beam, int n_angles = 721);

// Bistatic scattering coefficient of one realization at the given angles (rad).
std::vector<double> bistatic_sigma(const BieSystem& system, const TaperedBeam& beam,
                                   const std::vector<double>& theta_s);

struct BistaticSpec {
    SurfaceSpec surface;
    Medium medium;
    double freq_hz = 4.1e9;
    double theta_i_deg = 30.0;
    int n_realizations = 50;
    std::vector<double> theta_s_deg;
    double taper_g = 0.0;  // 0 selects L/4
    DiagonalRule diagonal = DiagonalRule::LogCorrected;
};

struct BistaticResult {
    std::vector<double> theta_s_deg;
    std::vector<double> sigma_mean;
    std::vector<double> reflected_fraction;  // per realization
};

// Monte Carlo mean over realizations with seeds surface.seed + r.
BistaticResult bistatic_xs(const BistaticSpec& spec);

}  // namespace roughsar
