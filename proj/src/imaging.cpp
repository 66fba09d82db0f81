#include "roughsar/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace roughsar {

namespace {

std::vector<int> indices_in(const std::vector<double>& v, double lo, double hi)
{
    const double tol = 1e-9 * std::max(1.0, std::abs(hi - lo));
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (v[i] >= lo - tol && v[i] <= hi + tol)
            idx.push_back(i);
    return idx;
}

}  // namespace

ImageGrid km_image(const CMatrix& D, const IlluminationCache& cache)
{
    if (D.rows() != cache.n_freqs() || D.cols() != cache.n_positions())
        throw ConfigError("km_image: illumination cache does not match the data matrix");
    const int mn = cache.n_freqs() * cache.n_positions();
    const int np = cache.n_points();
    using RowMajor = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> a(cache.data().data(), mn, np);
    CVector d(mn);
    for (int m = 0; m < cache.n_freqs(); ++m)
        for (int n = 0; n < cache.n_positions(); ++n)
            d(m * cache.n_positions() + n) = D(m, n);
    CVector sum = a.adjoint() * d;  // conj(a)^T d

    ImageGrid img;
    img.axes = cache.grid();
    img.values.resize(img.axes.nz(), img.axes.nx());
    for (int p = 0; p < np; ++p)
        img.values(p / img.axes.nx(), p % img.axes.nx()) = std::abs(sum(p));
    img.provenance = Provenance::KM;
    return img;
}

double mobius(double v, double delta)
{
    return delta / (1.0 - (1.0 - delta) * v);
}

ImageGrid crop(const ImageGrid& image, const Window& w)
{
    if (w.x_min > w.x_max || w.z_min > w.z_max)
        throw ConfigError("crop: empty window");
    const auto& ax = image.axes;
    const double tol = 1e-9;
    if (w.x_min < ax.x.front() - tol || w.x_max > ax.x.back() + tol || w.z_min < ax.z.front() - tol ||
        w.z_max > ax.z.back() + tol)
        throw ConfigError("crop: window outside the image grid");
    std::vector<int> ix = indices_in(ax.x, w.x_min, w.x_max);
    std::vector<int> iz = indices_in(ax.z, w.z_min, w.z_max);
    if (ix.empty() || iz.empty())
        throw ConfigError("crop: window contains no grid nodes");
    ImageGrid out;
    out.provenance = image.provenance;
    out.normalized = false;
    for (int i : ix)
        out.axes.x.push_back(ax.x[i]);
    for (int i : iz)
        out.axes.z.push_back(ax.z[i]);
    out.values.resize(static_cast<Eigen::Index>(iz.size()), static_cast<Eigen::Index>(ix.size()));
    for (std::size_t a = 0; a < iz.size(); ++a)
        for (std::size_t b = 0; b < ix.size(); ++b)
            out.values(a, b) = image.values(iz[a], ix[b]);
    return out;
}

ImageGrid normalize(const ImageGrid& image)
{
    double peak = image.values.maxCoeff();
    if (!(peak > 0.0))
        throw NumericalError("normalize: all-zero image");
    ImageGrid out = image;
    out.values /= peak;
    out.normalized = true;
    return out;
}

ImageGrid modified_km(const ImageGrid& image, double delta, const std::optional<Window>& region)
{
    if (!(delta > 0.0 && delta <= 1.0))
        throw ConfigError("modified_km: delta must lie in (0, 1]");
    ImageGrid out = normalize(region ? crop(image, *region) : image);
    out.values = out.values.unaryExpr([delta](double v) { return mobius(v, delta); });
    out.provenance = Provenance::ModifiedKM;
    out.normalized = true;
    return out;
}

std::vector<Peak> find_peaks(const ImageGrid& image, int n_peaks, double min_separation)
{
    if (n_peaks < 1)
        throw ConfigError("find_peaks: n_peaks must be >= 1");
    const int nx = image.axes.nx(), nz = image.axes.nz();
    const Eigen::MatrixXd& v = image.values;
    if (!(v.maxCoeff() > v.minCoeff()))
        throw NumericalError("find_peaks: constant image has no strict maxima");

    // Linear order (ix, iz) encodes the tie-breaking rule.
    auto order = [nz](int ix, int iz) { return ix * nz + iz; };
    std::vector<Peak> candidates;
    for (int ix = 0; ix < nx; ++ix)
        for (int iz = 0; iz < nz; ++iz) {
            double c = v(iz, ix);
            bool is_max = true;
            for (int dx = -1; dx <= 1 && is_max; ++dx)
                for (int dz = -1; dz <= 1; ++dz) {
                    int jx = ix + dx, jz = iz + dz;
                    if ((dx == 0 && dz == 0) || jx < 0 || jx >= nx || jz < 0 || jz >= nz)
                        continue;
                    double o = v(jz, jx);
                    if (o > c || (o == c && order(jx, jz) < order(ix, iz))) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                candidates.push_back({image.axes.x[ix], image.axes.z[iz], c, ix, iz});
        }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Peak& a, const Peak& b) { return a.value > b.value; });
    std::vector<Peak> peaks;
    for (const auto& c : candidates) {
        bool clear = true;
        for (const auto& p : peaks)
            if (std::hypot(c.x - p.x, c.z - p.z) < min_separation)
                clear = false;
        if (clear)
            peaks.push_back(c);
        if (static_cast<int>(peaks.size()) == n_peaks)
            return peaks;
    }
    throw NumericalError("find_peaks: found " + std::to_string(peaks.size()) + " of " + std::to_string(n_peaks) +
                         " requested maxima");
}

std::vector<ImageGrid> subregion_views(const ImageGrid& image, const std::vector<Point>& centers, double half_width)
{
    if (!(half_width > 0.0))
        throw ConfigError("subregion_views: half_width must be positive");
    std::vector<ImageGrid> out;
    for (const auto& c : centers)
        out.push_back(normalize(crop(image, {c.x - half_width, c.x + half_width, c.z - half_width, c.z + half_width})));
    return out;
}

double fwhm(const std::vector<double>& coord, const std::vector<double>& values, int peak)
{
    const int n = static_cast<int>(values.size());
    if (n < 3 || static_cast<int>(coord.size()) != n || peak < 0 || peak >= n)
        throw ConfigError("fwhm: bad profile");
    const double half = 0.5 * values[peak];
    int lo = peak, hi = peak;
    while (lo > 0 && values[lo - 1] >= half)
        --lo;
    while (hi < n - 1 && values[hi + 1] >= half)
        ++hi;
    if (lo == 0 || hi == n - 1)
        throw NumericalError("fwhm: profile does not fall below half maximum");
    auto cross = [&](int a, int b) {
        double t = (values[a] - half) / (values[a] - values[b]);
        return coord[a] + t * (coord[b] - coord[a]);
    };
    return std::abs(cross(hi, hi + 1) - cross(lo, lo - 1));
}

void write_image_csv(const std::string& path, const ImageGrid& image)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17) << "x,z,value\n";
    for (int iz = 0; iz < image.axes.nz(); ++iz)
        for (int ix = 0; ix < image.axes.nx(); ++ix)
            out << image.axes.x[ix] << ',' << image.axes.z[iz] << ',' << image.values(iz, ix) << '\n';
}

ImageGrid read_image_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("x,z,value", 0) != 0)
        throw ConfigError(path + ": unexpected image header");
    std::vector<double> xs, zs, vs;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        double x, z, v;
        char c1, c2;
        ss >> x >> c1 >> z >> c2 >> v;
        if (!ss)
            throw ConfigError(path + ": malformed row");
        xs.push_back(x);
        zs.push_back(z);
        vs.push_back(v);
    }
    ImageGrid img;
    for (std::size_t i = 0; i < xs.size() && (img.axes.x.empty() || zs[i] == zs[0]); ++i)
        img.axes.x.push_back(xs[i]);
    const int nx = img.axes.nx();
    if (nx == 0 || xs.size() % nx != 0)
        throw ConfigError(path + ": not a tensor grid");
    for (std::size_t i = 0; i < xs.size(); i += nx)
        img.axes.z.push_back(zs[i]);
    img.values.resize(img.axes.nz(), nx);
    for (std::size_t i = 0; i < vs.size(); ++i)
        img.values(static_cast<Eigen::Index>(i / nx), static_cast<Eigen::Index>(i % nx)) = vs[i];
    return img;
}

void write_image_pgm(const std::string& path, const ImageGrid& image)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    const int nx = image.axes.nx(), nz = image.axes.nz();
    const double lo = image.values.minCoeff(), hi = image.values.maxCoeff();
    out << "P5\n" << nx << ' ' << nz << "\n255\n";
    for (int iz = nz - 1; iz >= 0; --iz)
        for (int ix = 0; ix < nx; ++ix) {
            double t = hi > lo ? (image.values(iz, ix) - lo) / (hi - lo) : 0.0;
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
        }
}

}  // namespace roughsar
