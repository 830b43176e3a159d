#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "bregman/ext_real.hpp"
#include "bregman/measure.hpp"

namespace bregman {

/// Malformed input files or selection strings; the CLI maps this to its own
/// exit code, distinct from domain errors.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Measure file format: {"support": [<labels, optional>], "mass": [...]}.
/// Masses are read as 64-bit floats; a support array, when present, must
/// match the mass length.
inline discrete_measure load_measure_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open measure file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("bad JSON in " + path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("mass") || !j["mass"].is_array())
        throw input_error(path.string() + ": expected an object with a \"mass\" array");
    std::vector<double> masses;
    masses.reserve(j["mass"].size());
    for (const auto& v : j["mass"]) {
        if (!v.is_number()) throw input_error(path.string() + ": masses must be numbers");
        masses.push_back(v.get<double>());
    }
    if (j.contains("support") && j["support"].is_array() && j["support"].size() != masses.size())
        throw input_error(path.string() + ": support and mass lengths differ");
    try {
        return discrete_measure(std::move(masses));
    } catch (const std::invalid_argument& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

/// Shortest decimal form that round-trips the 64-bit value (to_chars).
/// Negative zero prints as 0.
inline std::string format_shortest(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_shortest(ext_real v) { return format_shortest(v.value()); }

/// 17 significant digits: enough to reproduce any double exactly.
inline std::string format_sig17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_sig17(ext_real v) { return format_sig17(v.value()); }

/// Strict round-trip parse of one double (accepts "inf"/"-inf").
inline double parse_double(std::string_view text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw input_error("unparseable number: '" + std::string(text) + "'");
    return v;
}

/// Comma-separated vector of decimals (natural parameters on the CLI).
inline std::vector<double> parse_vector(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
        out.push_back(parse_double(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace bregman
