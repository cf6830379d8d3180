#pragma once

// csv / json / dat renderings of a SweepTable. Every number is written with
// nine significant digits, so the three formats carry identical values.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "memcost/error.hpp"
#include "memcost/sweep.hpp"

namespace memcost {

enum class Format { Csv, Json, Dat };

inline Format parse_format(std::string_view text) {
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    if (text == "dat") return Format::Dat;
    throw ValidationError("unknown format '" + std::string(text) + "' (csv|json|dat)");
}

// The value a reader recovers from the emitted text.
inline double quantize(double v) {
    if (!std::isfinite(v)) throw NumericError("cannot emit non-finite value");
    return std::strtod(format_number(v).c_str(), nullptr);
}

inline SweepTable quantized(SweepTable t) {
    for (auto& row : t.rows)
        for (auto& v : row) v = quantize(v);
    for (auto& d : t.dropped) {
        d.value = quantize(d.value);
        if (d.curve) d.curve = quantize(*d.curve);
    }
    return t;
}

namespace detail {

inline std::string dropped_line(const SweepTable& t, const DroppedPoint& d) {
    std::string s = "# dropped: ";
    if (d.curve) s += t.columns[0] + "=" + format_number(*d.curve) + " ";
    s += t.columns[t.variable_column()] + "=" + format_number(d.value) + " (" + d.reason + ")";
    return s;
}

inline std::string curve_suffix(const std::string& column, double value) {
    std::string name = column;
    std::erase(name, '_');
    for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return "_" + name + format_number(value);
}

} // namespace detail

inline std::string emit_csv(const SweepTable& t) {
    std::ostringstream out;
    for (const auto& [k, v] : t.metadata) out << "# " << k << ": " << v << '\n';
    for (const auto& d : t.dropped) out << detail::dropped_line(t, d) << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
    return out.str();
}

inline std::string emit_json(const SweepTable& t) {
    nlohmann::ordered_json j;
    j["columns"] = t.columns;
    j["multi_curve"] = t.multi_curve;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (double v : row) r.push_back(quantize(v));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    auto md = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.metadata) md[k] = v;
    j["metadata"] = std::move(md);
    auto dropped = nlohmann::ordered_json::array();
    for (const auto& d : t.dropped) {
        nlohmann::ordered_json e;
        e["curve"] = d.curve ? nlohmann::ordered_json(quantize(*d.curve)) : nlohmann::ordered_json(nullptr);
        e["value"] = quantize(d.value);
        e["reason"] = d.reason;
        dropped.push_back(std::move(e));
    }
    j["dropped"] = std::move(dropped);
    return j.dump(2) + "\n";
}

inline SweepTable parse_json_table(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("json table: ") + e.what());
    }
    SweepTable t;
    try {
        t.columns = j.at("columns").get<std::vector<std::string>>();
        t.multi_curve = j.at("multi_curve").get<bool>();
        for (const auto& r : j.at("rows")) t.rows.push_back(r.get<std::vector<double>>());
        for (const auto& [k, v] : j.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
        for (const auto& e : j.at("dropped")) {
            DroppedPoint d;
            if (!e.at("curve").is_null()) d.curve = e.at("curve").get<double>();
            d.value = e.at("value").get<double>();
            d.reason = e.at("reason").get<std::string>();
            t.dropped.push_back(std::move(d));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("json table: ") + e.what());
    }
    return t;
}

struct DatFile {
    std::string suffix;  // empty for single-curve tables
    std::string content;
};

// Two whitespace-separated columns (swept variable, first result), no
// header; one file per curve. Dropped points do not appear.
inline std::vector<DatFile> emit_dat(const SweepTable& t) {
    const std::size_t xc = t.variable_column();
    const std::size_t yc = t.result_column();
    if (t.columns.size() <= yc) throw ValidationError("dat: table has no result column");
    std::vector<DatFile> files;
    for (const auto& row : t.rows) {
        std::string suffix = t.multi_curve ? detail::curve_suffix(t.columns[0], row[0]) : "";
        if (files.empty() || files.back().suffix != suffix) files.push_back({std::move(suffix), {}});
        files.back().content += format_number(row[xc]) + " " + format_number(row[yc]) + "\n";
    }
    if (files.empty()) files.push_back({"", ""});
    return files;
}

// Single-stream rendering. Multi-curve tables cannot be one dat stream.
inline std::string emit(const SweepTable& t, Format f) {
    switch (f) {
    case Format::Csv: return emit_csv(t);
    case Format::Json: return emit_json(t);
    case Format::Dat: {
        if (t.multi_curve) throw ValidationError("dat: multi-curve table needs one file per curve (use emit_dat)");
        return emit_dat(t).front().content;
    }
    }
    return {};
}

} // namespace memcost
