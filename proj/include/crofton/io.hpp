#pragma once

// Flat-file formats: point-cloud CSV, estimate JSON, run-record CSV.

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "crofton/crofton.hpp"
#include "crofton/error.hpp"
#include "crofton/point_cloud.hpp"

namespace crofton {

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_points(std::ostream& os, const PointCloud& cloud) {
    os << "# crofton-points v1 d=" << cloud.dim() << '\n';
    std::string row;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        row.clear();
        const auto p = cloud[i];
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (a) row += ',';
            row += format_double(p[a]);
        }
        row += '\n';
        os << row;
    }
}

inline void write_points(const std::string& path, const PointCloud& cloud) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw usage_error("cannot open '" + path + "' for writing");
    write_points(os, cloud);
    os.flush();
    if (!os) throw usage_error("write to '" + path + "' failed");
}

namespace detail {

inline double parse_double(std::string_view tok, std::size_t line_no) {
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size())
        throw data_error("line " + std::to_string(line_no) + ": bad number '" + std::string(tok) + "'");
    return v;
}

}  // namespace detail

inline PointCloud read_points(std::istream& is) {
    std::string line;
    std::size_t line_no = 0;
    int d = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::string prefix = "# crofton-points v1 d=";
        if (line.rfind(prefix, 0) != 0)
            throw data_error("line " + std::to_string(line_no) + ": expected header '# crofton-points v1 d=<d>'");
        const double dv = detail::parse_double(std::string_view(line).substr(prefix.size()), line_no);
        if (dv != static_cast<int>(dv) || dv < 2)
            throw data_error("line " + std::to_string(line_no) + ": invalid dimension in header");
        d = static_cast<int>(dv);
        break;
    }
    if (d == 0) throw data_error("empty point file (missing header)");

    PointCloud cloud(d, Provenance::file);
    Vec p(static_cast<std::size_t>(d));
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line[line.find_first_not_of(" \t")] == '#') continue;
        std::string_view rest(line);
        std::size_t a = 0;
        for (;;) {
            const auto comma = rest.find(',');
            if (a >= p.size())
                throw data_error("line " + std::to_string(line_no) + ": more than " + std::to_string(d) + " columns");
            p[a++] = detail::parse_double(rest.substr(0, comma), line_no);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (a != p.size())
            throw data_error("line " + std::to_string(line_no) + ": expected " + std::to_string(d) + " columns, got " + std::to_string(a));
        try {
            cloud.push_back(p);
        } catch (const Error& e) {
            throw data_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cloud;
}

inline PointCloud read_points(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw data_error("cannot open '" + path + "'");
    return read_points(is);
}

inline nlohmann::ordered_json to_json(const Estimate& e) {
    nlohmann::ordered_json j;
    j["value"] = e.value;
    j["stderr"] = e.std_error;
    j["counter_kind"] = e.counter_kind;
    j[e.counter_kind == "alpha" ? "alpha" : "epsilon"] = e.parameter;
    j["n_points"] = e.n_points;
    j["runtime_ms"] = e.runtime_ms;
    j["centers_pruned"] = e.centers_pruned;
    j["plan"] = {{"k", e.plan.k}, {"l", e.plan.l}, {"L", e.plan.L}, {"seed", e.plan.seed}, {"d", e.plan.d}};
    return j;
}

/// One benchmark run.
struct RunRecord {
    std::string command = "bench";
    std::string shape;
    std::string shape_params;  // "key=value;key=value"
    std::string method;
    std::size_t n = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    int k = 0;
    int l = 0;
    double parameter = 0.0;  // epsilon or alpha
    int cap = 0;
    double value = 0.0;
    double std_error = 0.0;
    double truth = 0.0;  // NaN when unknown
    double abs_error = 0.0;
    double rel_error = 0.0;
    double runtime_ms = 0.0;

    static const char* header() {
        return "command,shape,shape_params,method,n,rep,seed,k,l,parameter,cap,value,stderr,truth,abs_error,rel_error,runtime_ms";
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << command << ',' << shape << ',' << shape_params << ',' << method << ',' << n << ',' << rep << ',' << seed
           << ',' << k << ',' << l << ',' << format_double(parameter) << ',' << cap << ',' << format_double(value) << ','
           << format_double(std_error) << ',' << format_double(truth) << ',' << format_double(abs_error) << ','
           << format_double(rel_error) << ',' << format_double(runtime_ms);
        return os.str();
    }

    static RunRecord from_csv(const std::string& row) {
        std::vector<std::string> f;
        std::stringstream ss(row);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 17) throw data_error("run record needs 17 fields, got " + std::to_string(f.size()));
        const auto num = [](const std::string& s) {
            if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
            return detail::parse_double(s, 0);
        };
        RunRecord r;
        r.command = f[0];
        r.shape = f[1];
        r.shape_params = f[2];
        r.method = f[3];
        r.n = std::stoull(f[4]);
        r.rep = std::stoi(f[5]);
        r.seed = std::stoull(f[6]);
        r.k = std::stoi(f[7]);
        r.l = std::stoi(f[8]);
        r.parameter = num(f[9]);
        r.cap = std::stoi(f[10]);
        r.value = num(f[11]);
        r.std_error = num(f[12]);
        r.truth = num(f[13]);
        r.abs_error = num(f[14]);
        r.rel_error = num(f[15]);
        r.runtime_ms = num(f[16]);
        return r;
    }
};

}  // namespace crofton
