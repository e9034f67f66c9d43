#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lgf::io {

inline constexpr int kSchemaVersion = 1;

/// One output row. Command-specific columns go in `extra`, in emission order.
struct OutputRecord {
    std::string method;
    int d = 0;
    std::optional<double> a;
    std::optional<double> q;
    std::optional<double> s;
    std::optional<long> n;
    std::vector<double> x;
    double value = 0.0;
    double log_value = 0.0;
    double est_error = 0.0;
    std::optional<std::string> regime;
    std::vector<std::pair<std::string, std::optional<double>>> extra;

    bool operator==(const OutputRecord&) const = default;
};

/// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double v);
double parse_double(const std::string& s);

/// "# schema=1" line, header and rows. The extra columns are taken from the first record;
/// every record must carry the same extra keys.
void write_csv(std::ostream& os, const std::vector<OutputRecord>& records);
std::vector<OutputRecord> read_csv(std::istream& is);

/// {"schema": 1, "records": [...]}; non-finite numbers are written as strings.
void write_json(std::ostream& os, const std::vector<OutputRecord>& records);
std::vector<OutputRecord> read_json(std::istream& is);

}  // namespace lgf::io
