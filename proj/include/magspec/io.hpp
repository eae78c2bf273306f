#pragma once

// Artifact serialization. Numbers are written with std::to_chars, so output is
// independent of the process locale.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "magspec/degennes.hpp"
#include "magspec/errors.hpp"

namespace magspec::io {

/// 17 significant digits, shortest of fixed/scientific; "nan", "inf", "-inf" otherwise.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return {buf, res.ptr};
}

inline std::string format_int(long long v) { return std::to_string(v); }

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open " + path.string() + " for writing");
        columns_ = header.size();
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) throw Error("CsvWriter: row width does not match the header");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1)
            cells.push_back(line.substr(start, pos - start));
        cells.push_back(line.substr(start));
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

inline nlohmann::ordered_json to_json(const degennes::DeGennesConstants& K) {
    nlohmann::ordered_json j;
    j["gamma"] = K.gamma;
    j["theta"] = K.theta;
    j["xi"] = K.xi;
    j["theta_prime"] = K.theta_prime;
    j["phi0_sq"] = K.phi0_sq;
    j["moment1"] = K.moment1;
    j["moment2"] = K.moment2;
    j["moment3"] = K.moment3;
    j["resolvent_integral"] = K.resolvent_integral;
    j["resolvent_sign"] = K.resolvent_integral >= 0 ? "+" : "-";
    j["k0"] = K.k0;
    j["k1"] = K.k1;
    j["k1_as_printed"] = K.k1_as_printed;
    j["k2"] = K.k2;
    j["mu1"] = K.mu1;
    j["c_upper"] = K.c_upper;
    j["c0"] = K.c0;
    j["c1"] = K.c1;
    j["theta1"] = K.theta1;
    j["grid"] = {{"lo", K.grid.lo}, {"hi", K.grid.hi}, {"n", K.grid.n}};
    j["phi"] = K.phi;
    return j;
}

} // namespace magspec::io
