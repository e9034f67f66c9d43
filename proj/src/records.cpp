#include "lgf/records.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lgf::io {

namespace {

const std::vector<std::string> kBaseColumns = {"method", "d", "a", "q", "s", "n", "x",
                                               "value", "log_value", "est_error", "regime"};

std::string join_x(const std::vector<double>& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ';';
        s += format_double(x[i]);
    }
    return s;
}

std::vector<double> split_x(const std::string& s) {
    std::vector<double> x;
    if (s.empty()) return x;
    std::size_t start = 0;
    for (;;) {
        const auto end = s.find(';', start);
        x.push_back(parse_double(s.substr(start, end - start)));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return x;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto end = line.find(',', start);
        out.push_back(line.substr(start, end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> opt_parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

nlohmann::json num_json(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double json_num(const nlohmann::json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? num_json(*v) : nlohmann::json(nullptr); }

std::optional<double> json_opt(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return json_num(j);
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

void write_csv(std::ostream& os, const std::vector<OutputRecord>& records) {
    os << "# schema=" << kSchemaVersion << '\n';
    for (std::size_t i = 0; i < kBaseColumns.size(); ++i) os << (i ? "," : "") << kBaseColumns[i];
    if (!records.empty())
        for (const auto& [k, v] : records.front().extra) os << ',' << k;
    os << '\n';
    for (const auto& r : records) {
        os << r.method << ',' << r.d << ',' << opt_str(r.a) << ',' << opt_str(r.q) << ',' << opt_str(r.s) << ','
           << (r.n ? std::to_string(*r.n) : std::string()) << ',' << join_x(r.x) << ',' << format_double(r.value)
           << ',' << format_double(r.log_value) << ',' << format_double(r.est_error) << ','
           << r.regime.value_or("");
        if (r.extra.size() != records.front().extra.size())
            throw std::invalid_argument("write_csv: records carry different extra columns");
        for (const auto& [k, v] : r.extra) os << ',' << opt_str(v);
        os << '\n';
    }
}

std::vector<OutputRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "# schema=" + std::to_string(kSchemaVersion))
        throw std::invalid_argument("read_csv: missing or unsupported schema line");
    if (!std::getline(is, line)) throw std::invalid_argument("read_csv: missing header");
    const auto header = split_csv_line(line);
    if (header.size() < kBaseColumns.size() ||
        !std::equal(kBaseColumns.begin(), kBaseColumns.end(), header.begin()))
        throw std::invalid_argument("read_csv: unexpected header");
    std::vector<OutputRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw std::invalid_argument("read_csv: wrong number of fields");
        OutputRecord r;
        r.method = f[0];
        r.d = std::stoi(f[1]);
        r.a = opt_parse(f[2]);
        r.q = opt_parse(f[3]);
        r.s = opt_parse(f[4]);
        if (!f[5].empty()) r.n = std::stol(f[5]);
        r.x = split_x(f[6]);
        r.value = parse_double(f[7]);
        r.log_value = parse_double(f[8]);
        r.est_error = parse_double(f[9]);
        if (!f[10].empty()) r.regime = f[10];
        for (std::size_t i = kBaseColumns.size(); i < header.size(); ++i) r.extra.emplace_back(header[i], opt_parse(f[i]));
        out.push_back(std::move(r));
    }
    return out;
}

void write_json(std::ostream& os, const std::vector<OutputRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j;
        j["method"] = r.method;
        j["d"] = r.d;
        j["a"] = opt_json(r.a);
        j["q"] = opt_json(r.q);
        j["s"] = opt_json(r.s);
        j["n"] = r.n ? nlohmann::json(*r.n) : nlohmann::json(nullptr);
        nlohmann::json xs = nlohmann::json::array();
        for (double v : r.x) xs.push_back(num_json(v));
        j["x"] = xs;
        j["value"] = num_json(r.value);
        j["log_value"] = num_json(r.log_value);
        j["est_error"] = num_json(r.est_error);
        j["regime"] = r.regime ? nlohmann::json(*r.regime) : nlohmann::json(nullptr);
        nlohmann::json extra = nlohmann::json::array();
        for (const auto& [k, v] : r.extra) extra.push_back({k, opt_json(v)});
        j["extra"] = extra;
        arr.push_back(std::move(j));
    }
    nlohmann::json doc;
    doc["schema"] = kSchemaVersion;
    doc["records"] = arr;
    os << doc.dump(1) << '\n';
}

std::vector<OutputRecord> read_json(std::istream& is) {
    const auto doc = nlohmann::json::parse(is);
    if (doc.at("schema").get<int>() != kSchemaVersion) throw std::invalid_argument("read_json: unsupported schema");
    std::vector<OutputRecord> out;
    for (const auto& j : doc.at("records")) {
        OutputRecord r;
        r.method = j.at("method").get<std::string>();
        r.d = j.at("d").get<int>();
        r.a = json_opt(j.at("a"));
        r.q = json_opt(j.at("q"));
        r.s = json_opt(j.at("s"));
        if (!j.at("n").is_null()) r.n = j.at("n").get<long>();
        for (const auto& v : j.at("x")) r.x.push_back(json_num(v));
        r.value = json_num(j.at("value"));
        r.log_value = json_num(j.at("log_value"));
        r.est_error = json_num(j.at("est_error"));
        if (!j.at("regime").is_null()) r.regime = j.at("regime").get<std::string>();
        for (const auto& e : j.at("extra")) r.extra.emplace_back(e.at(0).get<std::string>(), json_opt(e.at(1)));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace lgf::io
