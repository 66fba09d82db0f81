#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "roughsar/config.hpp"
#include "roughsar/forward.hpp"
#include "roughsar/gbr.hpp"
#include "roughsar/halfspace.hpp"
#include "roughsar/imaging.hpp"
#include "roughsar/io.hpp"
#include "roughsar/kernels.hpp"
#include "roughsar/pipeline.hpp"
#include "roughsar/surface.hpp"

namespace py = pybind11;
using namespace roughsar;

namespace {

Acquisition make_acquisition(const std::vector<double>& freqs_hz, const std::vector<double>& xs, double altitude,
                             double eps_r, double beta)
{
    Acquisition a;
    a.freqs_hz = freqs_hz;
    for (double x : xs)
        a.positions.push_back({x, altitude});
    a.medium.eps_r = eps_r;
    a.medium.beta = beta;
    a.altitude = altitude;
    a.aperture = xs.empty() ? 0.0 : xs.back() - xs.front();
    validate(a);
    return a;
}

std::vector<PointTarget> make_targets(const std::vector<std::tuple<double, double, cdouble>>& targets)
{
    std::vector<PointTarget> out;
    for (const auto& [x, z, rho] : targets)
        out.push_back({{x, z}, rho});
    return out;
}

RoughSurface surface_from_arrays(double domain_len, const std::vector<double>& h, const std::vector<double>& h1,
                                 const std::vector<double>& h2)
{
    const int n = static_cast<int>(h.size());
    if (n < 4 || h1.size() != h.size() || h2.size() != h.size())
        throw ConfigError("surface arrays must share one length >= 4");
    RoughSurface s = RoughSurface::flat(domain_len, n);
    s.h = h;
    s.h1 = h1;
    s.h2 = h2;
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Rough-interface GPR SAR simulation, ground-bounce removal and Kirchhoff imaging";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<RoughSurface>(m, "RoughSurface")
        .def_readonly("domain_len", &RoughSurface::domain_len)
        .def_readonly("dt", &RoughSurface::dt)
        .def_readonly("t", &RoughSurface::t)
        .def_readonly("h", &RoughSurface::h)
        .def_readonly("h1", &RoughSurface::h1)
        .def_readonly("h2", &RoughSurface::h2)
        .def("__len__", &RoughSurface::size);

    m.def(
        "generate_surface",
        [](double h_rms, double corr_len, double domain_len, int n_points, std::uint64_t seed) {
            return generate_surface({h_rms, corr_len, domain_len, n_points, seed});
        },
        py::arg("h_rms") = 0.002, py::arg("corr_len") = 0.08, py::arg("domain_len") = 4.0,
        py::arg("n_points") = 2048, py::arg("seed") = 0);
    m.def("flat_surface", &RoughSurface::flat, py::arg("domain_len"), py::arg("n_points"));
    m.def("surface_from_arrays", &surface_from_arrays, py::arg("domain_len"), py::arg("h"), py::arg("h1"),
          py::arg("h2"));

    m.def("hankel1_0", &hankel1_0, py::arg("z"));
    m.def("hankel1_1", &hankel1_1, py::arg("z"));

    m.def(
        "field_down",
        [](double omega, std::pair<double, double> platform, std::pair<double, double> image, double eps_r) {
            return field_down(omega, {platform.first, platform.second}, {image.first, image.second}, eps_r);
        },
        py::arg("omega"), py::arg("platform"), py::arg("image"), py::arg("eps_r"));
    m.def(
        "field_up",
        [](double omega, std::pair<double, double> image, std::pair<double, double> platform, double eps_r) {
            return field_up(omega, {image.first, image.second}, {platform.first, platform.second}, eps_r);
        },
        py::arg("omega"), py::arg("image"), py::arg("platform"), py::arg("eps_r"));
    m.def(
        "illumination",
        [](double omega, std::pair<double, double> platform, std::pair<double, double> image, double eps_r) {
            return illumination(omega, {platform.first, platform.second}, {image.first, image.second}, eps_r);
        },
        py::arg("omega"), py::arg("platform"), py::arg("image"), py::arg("eps_r"));

    m.def(
        "simulate",
        [](const RoughSurface& surface, const std::vector<double>& freqs_hz, const std::vector<double>& xs,
           double altitude, double eps_r, double beta, const std::vector<std::tuple<double, double, cdouble>>& targets) {
            Acquisition acq = make_acquisition(freqs_hz, xs, altitude, eps_r, beta);
            ForwardResult r;
            {
                py::gil_scoped_release release;
                r = simulate(surface, acq, make_targets(targets));
            }
            return py::make_tuple(r.R.values, r.S.values);
        },
        py::arg("surface"), py::arg("freqs_hz"), py::arg("xs"), py::arg("altitude"), py::arg("eps_r"),
        py::arg("beta"), py::arg("targets") = std::vector<std::tuple<double, double, cdouble>>{},
        "Returns (R, S) as (n_freqs, n_positions) complex arrays.");

    m.def(
        "add_noise",
        [](const CMatrix& R, const CMatrix& S, double snr_db, std::uint64_t seed) {
            NoisyData d = add_noise({R, Role::R}, {S, Role::S}, snr_db, seed);
            return py::make_tuple(d.D.values, d.eta.values, d.snr_db, d.esnr_db, d.esnr_ratio_db);
        },
        py::arg("R"), py::arg("S"), py::arg("snr_db"), py::arg("seed"), "Returns (D, eta, snr_db, esnr_db, esnr_ratio_db).");

    m.def(
        "singular_values", [](const CMatrix& D) { return svd_spectrum(D).sigma; }, py::arg("D"));
    m.def(
        "detect_knee",
        [](const CMatrix& D, double min_decades) { return detect_knee(svd_spectrum(D), min_decades).j_star; },
        py::arg("D"), py::arg("min_decades") = 1.5);
    m.def(
        "remove_ground_bounce", [](const CMatrix& D, int j_star) { return remove_ground_bounce(D, j_star); },
        py::arg("D"), py::arg("j_star"));

    m.def("mobius", &mobius, py::arg("normalized_value"), py::arg("delta"));
    m.def(
        "km_image",
        [](const CMatrix& D_tilde, const std::vector<double>& freqs_hz, const std::vector<double>& xs, double altitude,
           double eps_r, std::vector<double> x_grid, std::vector<double> z_grid) {
            GridAxes grid{std::move(x_grid), std::move(z_grid)};
            std::vector<Point> pos;
            for (double x : xs)
                pos.push_back({x, altitude});
            Eigen::MatrixXd values;
            {
                py::gil_scoped_release release;
                IlluminationCache cache = IlluminationCache::build(freqs_hz, pos, grid, eps_r);
                values = km_image(D_tilde, cache).values;
            }
            return values;
        },
        py::arg("D_tilde"), py::arg("freqs_hz"), py::arg("xs"), py::arg("altitude"), py::arg("eps_r"),
        py::arg("x_grid"), py::arg("z_grid"), "KM image as an (nz, nx) array.");
    m.def(
        "modified_km",
        [](const Eigen::MatrixXd& image, double delta) {
            ImageGrid g;
            g.values = image;
            g.axes.x.resize(image.cols());
            g.axes.z.resize(image.rows());
            for (Eigen::Index i = 0; i < image.cols(); ++i)
                g.axes.x[i] = static_cast<double>(i);
            for (Eigen::Index i = 0; i < image.rows(); ++i)
                g.axes.z[i] = static_cast<double>(i);
            return modified_km(g, delta).values;
        },
        py::arg("image"), py::arg("delta"));

    m.def(
        "run_pipeline",
        [](const std::string& config_path, const std::string& out_dir) {
            Pipeline p(load_config(config_path), out_dir);
            nlohmann::json result;
            {
                py::gil_scoped_release release;
                result = p.run();
            }
            return result.dump();
        },
        py::arg("config_path"), py::arg("out_dir"), "Runs every stage; returns the JSON summary as a string.");

    m.attr("__version__") = version_string();
}
