#pragma once

#include <string>

#include "json.hpp"

#include "roughsar/forward.hpp"
#include "roughsar/types.hpp"

namespace roughsar {

constexpr int kSchemaVersion = 1;

std::string sha256_hex(const std::string& bytes);

// Throws ConfigError when the artifact carries a different schema version.
void check_schema_version(const nlohmann::json& j, const std::string& context);

nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);

nlohmann::json acquisition_to_json(const Acquisition& acq);
Acquisition acquisition_from_json(const nlohmann::json& j);

// CSV (m, n, re, im) plus a sidecar <path without .csv>.json.
void write_data_matrix(const std::string& csv_path, const DataMatrix& d, const Acquisition& acq,
                       const nlohmann::json& extra = nlohmann::json::object());

struct DataMatrixFile {
    DataMatrix data;
    Acquisition acquisition;
    nlohmann::json meta;
};

DataMatrixFile read_data_matrix(const std::string& csv_path);

std::string sidecar_path(const std::string& csv_path);

// Columns j, sigma_j, sigma_j / sigma_1.
void write_spectrum_csv(const std::string& path, const Eigen::VectorXd& sigma);

}  // namespace roughsar
