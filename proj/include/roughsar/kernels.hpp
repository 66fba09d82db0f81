#pragma once

#include "roughsar/surface.hpp"
#include "roughsar/types.hpp"

namespace roughsar {

struct Medium {
    double eps_r = 9.0;
    double beta = 0.0;
    double c = kSpeedOfLight;
};

struct Wavenumbers {
    double k0 = 0.0;
    cdouble k1;
};

void validate(const Medium& medium);

// k0 = omega / c, k1 = k0 sqrt(eps_r (1 + i beta)).
Wavenumbers wavenumbers(double omega, const Medium& medium);

cdouble hankel1_0(cdouble z);
cdouble hankel1_1(cdouble z);
// Both orders at once; the hot path of matrix assembly.
void hankel1_01(cdouble z, cdouble& h0, cdouble& h1);

// (i/4) H0(k |p - q|)
cdouble green(cdouble k, Point p, Point q);

// Kernel of the double-layer operator with the sqrt(1 + h'^2) factor absorbed, upward normal at the
// source node j, evaluated at node i.
cdouble green_dn(cdouble k, const RoughSurface& surface, int i_eval, int j_src);

// Same kernel with field point p and source node data (xi, zeta, slope).
cdouble green_dn(cdouble k, Point p, double xi, double zeta, double slope);

}  // namespace roughsar
