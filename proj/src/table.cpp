#include "qvr/table.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qvr {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const ResultTable& t) {
    std::ostringstream out;
    for (const auto& [k, v] : t.provenance) out << "# " << k << "=" << v << "\n";
    if (!t.units.empty()) {
        out << "# units:";
        bool first = true;
        for (const auto& [col, unit] : t.units) {
            out << (first ? " " : ", ") << col << "=" << unit;
            first = false;
        }
        out << "\n";
    }
    const bool with_errors = !t.row_errors.empty();
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c];
    if (with_errors) out << ",error";
    out << "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t c = 0; c < t.rows[r].size(); ++c)
            out << (c ? "," : "") << format_double(t.rows[r][c]);
        if (with_errors) out << "," << t.row_errors[r];
        out << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace

ResultTable parse_csv(const std::string& text) {
    ResultTable t;
    std::istringstream in(text);
    std::string line;
    bool header_done = false;
    bool with_errors = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = line.substr(line.find_first_not_of("# "));
            if (body.rfind("units:", 0) == 0) continue;
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                t.provenance[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        auto parts = split_csv_line(line);
        if (!header_done) {
            if (!parts.empty() && parts.back() == "error") {
                with_errors = true;
                parts.pop_back();
            }
            t.columns = parts;
            header_done = true;
            continue;
        }
        std::string err;
        if (with_errors) {
            err = parts.back();
            parts.pop_back();
        }
        std::vector<double> row;
        row.reserve(parts.size());
        for (const auto& p : parts) {
            char* end = nullptr;
            const double v = std::strtod(p.c_str(), &end);
            if (end == p.c_str())
                throw config_error("csv", "non-numeric cell '" + p + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
        if (with_errors) t.row_errors.push_back(err);
    }
    return t;
}

std::string to_json(const ResultTable& t) {
    nlohmann::json j;
    j["provenance"] = t.provenance;
    j["columns"] = t.columns;
    j["units"] = t.units;
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row = nlohmann::json::array();
        for (const double v : r) {
            if (std::isnan(v))
                row.push_back(nullptr);  // JSON has no NaN
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (!t.row_errors.empty()) j["row_errors"] = t.row_errors;
    return j.dump(2) + "\n";
}

ResultTable parse_json(const std::string& text) {
    ResultTable t;
    const auto j = nlohmann::json::parse(text);
    t.provenance = j.value("provenance", std::map<std::string, std::string>{});
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.units = j.value("units", std::map<std::string, std::string>{});
    for (const auto& row : j.at("rows")) {
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& v : row)
            r.push_back(v.is_null() ? std::nan("") : v.get<double>());
        t.rows.push_back(std::move(r));
    }
    if (j.contains("row_errors"))
        t.row_errors = j["row_errors"].get<std::vector<std::string>>();
    return t;
}

void write_table(const ResultTable& t, const std::string& path,
                 const std::string& format) {
    std::ofstream out(path);
    if (!out) throw config_error("output.path", "cannot open '" + path + "'");
    if (format == "csv")
        out << to_csv(t);
    else if (format == "json")
        out << to_json(t);
    else
        throw config_error("output.format", "unknown format '" + format + "'");
}

ResultTable read_table(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw config_error("output.path", "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    if (format == "csv") return parse_csv(buf.str());
    if (format == "json") return parse_json(buf.str());
    throw config_error("output.format", "unknown format '" + format + "'");
}

std::string config_hash(const std::map<std::string, std::string>& kv) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& s) {
        for (const unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : kv) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qvr
