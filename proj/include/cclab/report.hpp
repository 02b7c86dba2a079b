#ifndef CCLAB_REPORT_HPP
#define CCLAB_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace cclab {

inline constexpr const char* kToolVersion = "0.1.0";

struct CheckResult {
    std::string id;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string details;
};

struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string version = kToolVersion;
    nlohmann::ordered_json config;
    std::vector<CheckResult> checks;
    std::vector<Series> series;

    bool all_pass() const;
    void add(const std::string& id, double value, double tolerance, bool pass,
             const std::string& details = "");
    // pass when |value| <= tolerance
    void add_abs(const std::string& id, double value, double tolerance, const std::string& details = "");
    // pass when value <= limit
    void add_upper(const std::string& id, double value, double limit, const std::string& details = "");
};

std::string report_json(const Report& r);
// checks table; series are flattened one per file by write_report
std::string checks_csv(const Report& r);
std::string series_csv(const Series& s);

// format: "json" or "csv". Empty path writes to stdout; in csv mode, series
// land next to the output file as <stem>.<series>.csv.
void write_report(const Report& r, const std::string& format, const std::string& path);

}  // namespace cclab

#endif
