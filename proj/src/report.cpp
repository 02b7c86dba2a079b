#include "cclab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace cclab {

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void Report::add(const std::string& id, double value, double tolerance, bool pass,
                 const std::string& details) {
    checks.push_back({id, value, tolerance, pass, details});
}

void Report::add_abs(const std::string& id, double value, double tolerance, const std::string& details) {
    add(id, value, tolerance, std::fabs(value) <= tolerance, details);
}

void Report::add_upper(const std::string& id, double value, double limit, const std::string& details) {
    add(id, value, limit, value <= limit, details);
}

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string report_json(const Report& r) {
    nlohmann::ordered_json j;
    j["version"] = r.version;
    j["config"] = r.config;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json jc;
        jc["id"] = c.id;
        jc["value"] = c.value;
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        jc["details"] = c.details;
        j["checks"].push_back(jc);
    }
    j["series"] = nlohmann::ordered_json::array();
    for (const auto& s : r.series) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["columns"] = s.columns;
        js["rows"] = s.rows;
        j["series"].push_back(js);
    }
    return j.dump(2) + "\n";
}

std::string checks_csv(const Report& r) {
    std::string out = "id,value,tolerance,pass,details\n";
    for (const auto& c : r.checks) {
        out += c.id + "," + fmt_double(c.value) + "," + fmt_double(c.tolerance) + "," +
               (c.pass ? "true" : "false") + "," + c.details + "\n";
    }
    return out;
}

std::string series_csv(const Series& s) {
    std::string out;
    for (size_t i = 0; i < s.columns.size(); ++i) {
        out += s.columns[i];
        out += (i + 1 == s.columns.size()) ? "\n" : ",";
    }
    for (const auto& row : s.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out += fmt_double(row[i]);
            out += (i + 1 == row.size()) ? "\n" : ",";
        }
    }
    return out;
}

void write_report(const Report& r, const std::string& format, const std::string& path) {
    if (format == "json") {
        const std::string text = report_json(r);
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output file: " + path);
            f << text;
        }
        return;
    }
    if (format != "csv") throw std::invalid_argument("unknown output format: " + format);
    if (path.empty()) {
        std::cout << checks_csv(r);
        for (const auto& s : r.series) {
            std::cout << "# series: " << s.name << "\n" << series_csv(s);
        }
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << checks_csv(r);
    std::string stem = path;
    const auto dotpos = stem.rfind('.');
    const auto slashpos = stem.rfind('/');
    if (dotpos != std::string::npos && (slashpos == std::string::npos || dotpos > slashpos))
        stem = stem.substr(0, dotpos);
    for (const auto& s : r.series) {
        std::ofstream g(stem + "." + s.name + ".csv", std::ios::binary);
        if (!g) throw std::runtime_error("cannot open series file for: " + s.name);
        g << series_csv(s);
    }
}

}  // namespace cclab
