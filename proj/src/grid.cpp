#include "roughsar/grid.hpp"

#include <cmath>

namespace roughsar {

std::vector<double> linspace(double a, double b, int n)
{
    if (n < 1)
        throw ConfigError("linspace: n must be positive");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[i] = a + (b - a) * i / (n - 1);
    return v;
}

GridAxes GridAxes::uniform(double x_min, double x_max, double z_min, double z_max, double spacing)
{
    if (!(spacing > 0.0) || !(x_max >= x_min) || !(z_max >= z_min))
        throw ConfigError("grid: invalid window or spacing");
    auto count = [spacing](double lo, double hi) {
        double n = (hi - lo) / spacing;
        if (std::abs(n - std::round(n)) > 1e-6)
            throw ConfigError("grid: window extent is not a multiple of the spacing");
        return static_cast<int>(std::round(n)) + 1;
    };
    GridAxes g;
    g.x = linspace(x_min, x_max, count(x_min, x_max));
    g.z = linspace(z_min, z_max, count(z_min, z_max));
    return g;
}

}  // namespace roughsar
