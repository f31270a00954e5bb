#ifndef QVR_TABLE_HPP
#define QVR_TABLE_HPP

#include <map>
#include <string>
#include <vector>

#include "qvr/errors.hpp"

namespace qvr {

/// Plot-ready tabular output. Provenance (version, config hash, truncation
/// order, timestamp) lives in the header block so value rows stay
/// deterministic; full-precision decimals make files byte-comparable across
/// runs. When row_errors is non-empty it parallels rows and adds an `error`
/// text column (sweeps record per-point failures there instead of aborting).
struct ResultTable {
    std::vector<std::string> columns;
    std::map<std::string, std::string> units;  ///< column -> unit label
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_errors;
    std::map<std::string, std::string> provenance;
};

std::string format_double(double v);  ///< 17 significant digits

std::string to_csv(const ResultTable& t);
ResultTable parse_csv(const std::string& text);

std::string to_json(const ResultTable& t);
ResultTable parse_json(const std::string& text);

void write_table(const ResultTable& t, const std::string& path,
                 const std::string& format);
ResultTable read_table(const std::string& path, const std::string& format);

/// FNV-1a 64-bit over the canonical sorted key=value listing.
std::string config_hash(const std::map<std::string, std::string>& kv);

}  // namespace qvr

#endif
