#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughsar/grid.hpp"
#include "roughsar/halfspace.hpp"
#include "roughsar/types.hpp"

namespace roughsar {

enum class Provenance { KM, ModifiedKM };

struct ImageGrid {
    GridAxes axes;
    Eigen::MatrixXd values;  // (nz, nx)
    Provenance provenance = Provenance::KM;
    bool normalized = false;

    double at(int p) const { return values(p / axes.nx(), p % axes.nx()); }
};

struct Window {
    double x_min, x_max, z_min, z_max;
};

struct Peak {
    double x = 0.0, z = 0.0, value = 0.0;
    int ix = 0, iz = 0;
};

// I(x, z) = | sum_mn d_mn conj(a_mn(x, z)) |
ImageGrid km_image(const CMatrix& D_tilde, const IlluminationCache& cache);

// Normalize to peak 1 inside the region (whole image by default), then I = delta / (1 - (1 - delta) I_bar).
// With a region the output is cropped to it.
ImageGrid modified_km(const ImageGrid& image, double delta, const std::optional<Window>& region = std::nullopt);

double mobius(double normalized_value, double delta);

ImageGrid crop(const ImageGrid& image, const Window& region);
ImageGrid normalize(const ImageGrid& image);

// Greedy grid argmax over local maxima with an exclusion radius; ties go to the lowest (x, then z) index.
std::vector<Peak> find_peaks(const ImageGrid& image, int n_peaks, double min_separation);

// Square windows around each centre, cropped and renormalized to peak 1.
std::vector<ImageGrid> subregion_views(const ImageGrid& image, const std::vector<Point>& centers, double half_width);

// Full width at half maximum of a sampled profile around index peak, by linear interpolation.
double fwhm(const std::vector<double>& coord, const std::vector<double>& values, int peak);

void write_image_csv(const std::string& path, const ImageGrid& image);
ImageGrid read_image_csv(const std::string& path);
// 8-bit binary PGM, rows from the top of the window (largest z) down.
void write_image_pgm(const std::string& path, const ImageGrid& image);

}  // namespace roughsar
