#pragma once

#include <vector>

#include "roughsar/types.hpp"

namespace roughsar {

// Tensor raster of image points; linear index p = iz * nx + ix.
struct GridAxes {
    std::vector<double> x, z;

    int nx() const { return static_cast<int>(x.size()); }
    int nz() const { return static_cast<int>(z.size()); }
    int size() const { return nx() * nz(); }
    Point point(int p) const { return {x[p % nx()], z[p / nx()]}; }

    static GridAxes uniform(double x_min, double x_max, double z_min, double z_max, double spacing);
};

std::vector<double> linspace(double a, double b, int n);

}  // namespace roughsar
