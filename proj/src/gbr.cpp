#include "roughsar/gbr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace roughsar {

SvdSpectrum svd_spectrum(const CMatrix& D)
{
    if (D.size() == 0)
        throw ConfigError("svd: empty matrix");
    if (!D.allFinite())
        throw NumericalError("svd: non-finite entries");
    Eigen::JacobiSVD<CMatrix> svd(D, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return SvdSpectrum{svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

KneeResult detect_knee(const SvdSpectrum& spectrum, double min_decades)
{
    const Eigen::VectorXd& s = spectrum.sigma;
    const int r = static_cast<int>(s.size());
    if (r < 4)
        throw ConfigError("detect_knee: need at least 4 singular values");
    if (!(s(0) > 0.0))
        throw NumericalError("detect_knee: zero matrix");

    const double floor = r * std::numeric_limits<double>::epsilon();
    std::vector<double> y(r);
    for (int j = 0; j < r; ++j)
        y[j] = std::log10(std::max(s(j) / s(0), floor));

    KneeResult k;
    std::ostringstream tr;
    tr << "log10(sigma_j/sigma_1):";
    for (double v : y)
        tr << ' ' << std::round(v * 1000.0) / 1000.0;

    // 0-based scan; reported indices are 1-based.
    const double slope = (y[r - 1] - y[0]) / (r - 1);
    int corner = -1;
    double best = 0.0;
    for (int j = 1; j < r - 1; ++j) {
        double gap = (y[0] + slope * j) - y[j];
        if (gap > best) {
            best = gap;
            corner = j;
        }
    }
    if (corner < 0) {
        k.trace = tr.str() + "; no point below the chord";
        throw NumericalError("detect_knee: no knee found; choose j* manually (" + k.trace + ")");
    }
    const double total = y[0] - y[corner];
    const double last_drop = y[corner - 1] - y[corner];
    k.corner = corner + 1;
    k.gap = best;
    k.cliff_share = total > 0.0 ? last_drop / total : 0.0;
    k.j_star = k.cliff_share > 0.5 ? corner : corner + 1;
    k.decay_decades = -y[k.j_star];
    tr << "; corner " << k.corner << " (gap " << best << "), cliff share " << k.cliff_share << ", j* " << k.j_star
       << ", decay " << k.decay_decades << " decades";
    k.trace = tr.str();

    const int j_max = r / 2;
    if (k.j_star > j_max || k.j_star >= r)
        throw NumericalError("detect_knee: knee beyond J_max = " + std::to_string(j_max) + "; choose j* manually (" +
                             k.trace + ")");
    if (k.decay_decades < min_decades)
        throw NumericalError("detect_knee: decay before the knee below " + std::to_string(min_decades) +
                             " decades; choose j* manually (" + k.trace + ")");
    return k;
}

CMatrix remove_ground_bounce(const SvdSpectrum& sp, const CMatrix& D, int j_star)
{
    const int r = static_cast<int>(sp.sigma.size());
    if (j_star < 1 || j_star >= r)
        throw ConfigError("remove_ground_bounce: j* must satisfy 1 <= j* < min(M, N)");
    if (sp.U.rows() != D.rows() || sp.V.rows() != D.cols())
        throw ConfigError("remove_ground_bounce: spectrum does not match D");
    CMatrix out = D;
    for (int i = 0; i < j_star; ++i)
        out.noalias() -= sp.sigma(i) * sp.U.col(i) * sp.V.col(i).adjoint();
    return out;
}

CMatrix remove_ground_bounce(const CMatrix& D, int j_star)
{
    return remove_ground_bounce(svd_spectrum(D), D, j_star);
}

}  // namespace roughsar
