#include "roughsar/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace roughsar {

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return out.str();
}

void check_schema_version(const nlohmann::json& j, const std::string& context)
{
    if (!j.contains("schema_version"))
        throw ConfigError(context + ": missing schema_version");
    int v = j.at("schema_version").get<int>();
    if (v != kSchemaVersion)
        throw ConfigError(context + ": schema version " + std::to_string(v) + " does not match " +
                          std::to_string(kSchemaVersion));
}

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_json(const std::string& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json acquisition_to_json(const Acquisition& acq)
{
    nlohmann::json j;
    j["freqs_hz"] = acq.freqs_hz;
    nlohmann::json pos = nlohmann::json::array();
    for (const auto& p : acq.positions)
        pos.push_back({p.x, p.z});
    j["positions_m"] = pos;
    j["medium"] = {{"eps_r", acq.medium.eps_r}, {"beta", acq.medium.beta}, {"c_m_per_s", acq.medium.c}};
    j["aperture_m"] = acq.aperture;
    j["altitude_m"] = acq.altitude;
    return j;
}

Acquisition acquisition_from_json(const nlohmann::json& j)
{
    try {
        Acquisition a;
        a.freqs_hz = j.at("freqs_hz").get<std::vector<double>>();
        for (const auto& p : j.at("positions_m"))
            a.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        a.medium.eps_r = j.at("medium").at("eps_r");
        a.medium.beta = j.at("medium").at("beta");
        a.medium.c = j.at("medium").at("c_m_per_s");
        a.aperture = j.at("aperture_m");
        a.altitude = j.at("altitude_m");
        validate(a);
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("acquisition metadata: ") + e.what());
    }
}

std::string sidecar_path(const std::string& csv_path)
{
    std::string base = csv_path;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
        base.resize(base.size() - 4);
    return base + ".json";
}

void write_data_matrix(const std::string& csv_path, const DataMatrix& d, const Acquisition& acq,
                       const nlohmann::json& extra)
{
    if (d.values.rows() != acq.n_freqs() || d.values.cols() != acq.n_positions())
        throw ConfigError("data matrix does not match the acquisition");
    std::ofstream out(csv_path);
    if (!out)
        throw std::runtime_error("cannot write " + csv_path);
    out << std::setprecision(17) << "m,n,re,im\n";
    for (Eigen::Index m = 0; m < d.values.rows(); ++m)
        for (Eigen::Index n = 0; n < d.values.cols(); ++n)
            out << m << ',' << n << ',' << d.values(m, n).real() << ',' << d.values(m, n).imag() << '\n';

    nlohmann::json meta = extra;
    meta["schema_version"] = kSchemaVersion;
    meta["role"] = role_name(d.role);
    meta["rows"] = d.values.rows();
    meta["cols"] = d.values.cols();
    meta["acquisition"] = acquisition_to_json(acq);
    write_json(sidecar_path(csv_path), meta);
}

DataMatrixFile read_data_matrix(const std::string& csv_path)
{
    DataMatrixFile f;
    f.meta = read_json(sidecar_path(csv_path));
    check_schema_version(f.meta, sidecar_path(csv_path));
    f.acquisition = acquisition_from_json(f.meta.at("acquisition"));
    f.data.role = role_from_name(f.meta.at("role").get<std::string>());
    const int rows = f.meta.at("rows"), cols = f.meta.at("cols");
    if (rows != f.acquisition.n_freqs() || cols != f.acquisition.n_positions())
        throw ConfigError(csv_path + ": dimensions disagree with the acquisition");
    f.data.values = CMatrix::Zero(rows, cols);

    std::ifstream in(csv_path);
    if (!in)
        throw ConfigError("cannot read " + csv_path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("m,n,re,im", 0) != 0)
        throw ConfigError(csv_path + ": unexpected header");
    int count = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        long m, n;
        double re, im;
        char c1, c2, c3;
        ss >> m >> c1 >> n >> c2 >> re >> c3 >> im;
        if (!ss || m < 0 || n < 0 || m >= rows || n >= cols)
            throw ConfigError(csv_path + ": malformed row '" + line + "'");
        f.data.values(m, n) = cdouble(re, im);
        ++count;
    }
    if (count != rows * cols)
        throw ConfigError(csv_path + ": expected " + std::to_string(rows * cols) + " entries");
    return f;
}

void write_spectrum_csv(const std::string& path, const Eigen::VectorXd& sigma)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17) << "j,sigma,sigma_rel\n";
    for (Eigen::Index j = 0; j < sigma.size(); ++j)
        out << (j + 1) << ',' << sigma(j) << ',' << (sigma(0) > 0.0 ? sigma(j) / sigma(0) : 0.0) << '\n';
}

}  // namespace roughsar
