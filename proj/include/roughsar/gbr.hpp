#pragma once

#include <string>
#include <vector>

#include "roughsar/types.hpp"

namespace roughsar {

struct SvdSpectrum {
    Eigen::VectorXd sigma;  // descending
    CMatrix U, V;           // full unitary factors
};

SvdSpectrum svd_spectrum(const CMatrix& D);

struct KneeResult {
    int j_star = 0;
    int corner = 0;
    double gap = 0.0;
    double cliff_share = 0.0;
    double decay_decades = 0.0;
    std::string trace;
};

// Knee of the log spectrum: the index that lies furthest below the chord joining the first and
// last log singular values (the corner). If the corner is reached through one dominant drop
// (more than half of the decay accumulated up to the corner) the modes before that drop are the
// coherent ones and j* = corner - 1, otherwise j* = corner. The removed modes must span at least
// min_decades of decay and j* may not exceed half the spectrum length.
KneeResult detect_knee(const SvdSpectrum& spectrum, double min_decades = 1.5);

// D - sum_{i <= j*} sigma_i u_i v_i^H
CMatrix remove_ground_bounce(const CMatrix& D, int j_star);
CMatrix remove_ground_bounce(const SvdSpectrum& spectrum, const CMatrix& D, int j_star);

}  // namespace roughsar
