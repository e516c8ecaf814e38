#pragma once

// File formats: JSON density matrices, CSV tables with commented headers,
// and serialization of the Monte-Carlo report.

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrec/robust.hpp"
#include "qrec/states.hpp"

namespace qrec {

// shortest form that still round-trips doubles through text comfortably
inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline nlohmann::json state_to_json(const DensityMatrix& rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            row.push_back({rho(i, j).real(), rho(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return {{"dim", rho.dim()}, {"matrix", std::move(rows)}};
}

// expects {"dim": n, "matrix": [[[re, im], ...], ...]}; anything else is a
// ValidationError, including a matrix that fails the density-matrix checks
inline DensityMatrix state_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("matrix")) {
        throw ValidationError("state document must be an object with \"dim\" and \"matrix\"");
    }
    if (!j["dim"].is_number_unsigned()) {
        throw ValidationError("\"dim\" must be a non-negative integer");
    }
    const std::size_t dim = j["dim"].get<std::size_t>();
    const nlohmann::json& rows = j["matrix"];
    if (!rows.is_array() || rows.size() != dim) {
        throw ValidationError("\"matrix\" must be an array of " + std::to_string(dim) + " rows");
    }
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const nlohmann::json& row = rows[i];
        if (!row.is_array() || row.size() != dim) {
            throw ValidationError("matrix row " + std::to_string(i) + " must have " +
                                  std::to_string(dim) + " entries");
        }
        for (std::size_t k = 0; k < dim; ++k) {
            const nlohmann::json& cell = row[k];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number()) {
                throw ValidationError("matrix entry (" + std::to_string(i) + ", " +
                                      std::to_string(k) + ") must be a [re, im] pair");
            }
            m(i, k) = cplx(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return DensityMatrix::validate(m);
}

inline DensityMatrix read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open state file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("state file " + path + " is not valid JSON: " + e.what());
    }
    return state_from_json(j);
}

inline void write_state_file(const std::string& path, const DensityMatrix& rho) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << state_to_json(rho).dump(2) << '\n';
}

// CSV with "# key: value" comment lines before the column header; numeric
// cells use %.12g and an absent optional renders as an empty field
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(&out) {}

    explicit CsvWriter(const std::string& path) : file_(path), out_(&file_) {
        if (!file_) throw ValidationError("cannot open for writing: " + path);
    }

    void comment(const std::string& key, const std::string& value) {
        *out_ << "# " << key << ": " << value << '\n';
    }

    void comment(const std::string& key, double value) { comment(key, csv_number(value)); }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) *out_ << ',';
            *out_ << names[i];
        }
        *out_ << '\n';
    }

    void row(const std::vector<std::optional<double>>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) *out_ << ',';
            if (cells[i]) *out_ << csv_number(*cells[i]);
        }
        *out_ << '\n';
    }

  private:
    std::ofstream file_;
    std::ostream* out_;
};

inline nlohmann::json report_to_json(const FidelityReport& report) {
    nlohmann::json angles = nlohmann::json::array();
    for (std::size_t k = 0; k < report.thetas.size(); ++k) {
        angles.push_back({{"theta", report.thetas[k]},
                          {"mean", report.f_bar[k].mean},
                          {"se", report.f_bar[k].se}});
    }
    return {{"grid", std::move(angles)},
            {"theta_opt", report.theta_opt},
            {"f_adaptive", {{"mean", report.f_adaptive.mean}, {"se", report.f_adaptive.se}}},
            {"f_damped", {{"mean", report.f_damped.mean}, {"se", report.f_damped.se}}},
            {"n_samples", report.spec.n_samples},
            {"master_seed", report.spec.master_seed},
            {"p_lower", report.spec.p_lower},
            {"p_upper", report.spec.p_upper},
            {"dim", report.spec.sampler.dim},
            {"rank", report.spec.sampler.rank}};
}

inline void write_report_csv(CsvWriter& csv, const FidelityReport& report) {
    csv.comment("n_samples", std::to_string(report.spec.n_samples));
    csv.comment("master_seed", std::to_string(report.spec.master_seed));
    csv.comment("p_lower", report.spec.p_lower);
    csv.comment("p_upper", report.spec.p_upper);
    csv.comment("dim", std::to_string(report.spec.sampler.dim));
    csv.comment("rank", std::to_string(report.spec.sampler.rank));
    csv.comment("theta_opt", report.theta_opt);
    csv.comment("f_adaptive_mean", report.f_adaptive.mean);
    csv.comment("f_adaptive_se", report.f_adaptive.se);
    csv.comment("f_damped_mean", report.f_damped.mean);
    csv.comment("f_damped_se", report.f_damped.se);
    csv.header({"theta", "f_mean", "f_se"});
    for (std::size_t k = 0; k < report.thetas.size(); ++k) {
        csv.row({report.thetas[k], report.f_bar[k].mean, report.f_bar[k].se});
    }
}

inline void write_report_csv(const std::string& path, const FidelityReport& report) {
    CsvWriter csv(path);
    write_report_csv(csv, report);
}

} // namespace qrec
