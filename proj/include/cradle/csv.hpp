#pragma once
// Plot-ready CSV persistence.  All numeric output goes through one fixed
// format (%.12e) and files are written in binary mode, so identical inputs
// serialize to identical bytes and write -> read -> write is idempotent.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cradle/photon_stats.hpp"
#include "cradle/propagator.hpp"
#include "cradle/sweeps.hpp"

namespace cradle {

namespace csv_detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& field, const char* name, int line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw std::runtime_error("line " + std::to_string(line_no) + ": field '" +
                                 name + "' is not a number: '" + field + "'");
    return v;
}

inline void require_fields(const std::vector<std::string>& fields, size_t expected,
                           int line_no) {
    if (fields.size() != expected)
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected) + " fields, got " +
                                 std::to_string(fields.size()));
}

template <typename WriteFn>
void write_file(const std::string& path, WriteFn write) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    write(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

template <typename ReadFn>
auto read_file(const std::string& path, ReadFn read) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    try {
        return read(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace csv_detail

inline void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "# chain: " << result.chain_note << "\n";
    out << "# version: " << result.version << "\n";
    out << "param_name,param_value,tau_mm,eta\n";
    for (const SweepPoint& pt : result.points)
        out << result.param_name << ',' << csv_detail::format_double(pt.param_value)
            << ',' << csv_detail::format_double(pt.tau_mm) << ','
            << csv_detail::format_double(pt.eta) << "\n";
}

inline SweepResult read_sweep_csv(std::istream& in) {
    SweepResult result;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# chain: ", 0) == 0) {
            result.chain_note = line.substr(9);
            continue;
        }
        if (line.rfind("# version: ", 0) == 0) {
            result.version = line.substr(11);
            continue;
        }
        if (line[0] == '#') continue;
        if (!header_seen) {
            if (line != "param_name,param_value,tau_mm,eta")
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": unexpected sweep header: '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto fields = csv_detail::split_fields(line);
        csv_detail::require_fields(fields, 4, line_no);
        if (result.param_name.empty())
            result.param_name = fields[0];
        else if (fields[0] != result.param_name)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": mixed param names: '" + fields[0] + "' vs '" +
                                     result.param_name + "'");
        SweepPoint pt;
        pt.param_value = csv_detail::parse_double(fields[1], "param_value", line_no);
        pt.tau_mm = csv_detail::parse_double(fields[2], "tau_mm", line_no);
        pt.eta = csv_detail::parse_double(fields[3], "eta", line_no);
        result.points.push_back(pt);
    }
    if (!header_seen) throw std::runtime_error("missing sweep header row");
    return result;
}

inline void write_field_csv(std::ostream& out, const ProbabilityField& field) {
    out << "z_mm,site_index,probability\n";
    for (size_t r = 0; r < field.z_mm.size(); ++r)
        for (int site = 0; site < field.p.cols(); ++site)
            out << csv_detail::format_double(field.z_mm[r]) << ',' << (site + 1) << ','
                << csv_detail::format_double(field.p(static_cast<int>(r), site)) << "\n";
}

inline ProbabilityField read_field_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    std::vector<double> zs;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "z_mm,site_index,probability")
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": unexpected field header: '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto fields = csv_detail::split_fields(line);
        csv_detail::require_fields(fields, 3, line_no);
        const double z = csv_detail::parse_double(fields[0], "z_mm", line_no);
        const double site = csv_detail::parse_double(fields[1], "site_index", line_no);
        const double p = csv_detail::parse_double(fields[2], "probability", line_no);
        const int site_idx = static_cast<int>(site);
        if (site_idx < 1 || site != site_idx)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": site_index must be a positive integer, got '" +
                                     fields[1] + "'");
        if (site_idx == 1) {
            zs.push_back(z);
            rows.emplace_back();
        }
        if (zs.empty() || site_idx != static_cast<int>(rows.back().size()) + 1)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": site_index out of sequence");
        rows.back().push_back(p);
    }
    if (!header_seen) throw std::runtime_error("missing field header row");
    if (rows.empty()) throw std::runtime_error("field file has no data rows");
    const size_t n_sites = rows.front().size();
    for (size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != n_sites)
            throw std::runtime_error("incomplete z-slice for z=" +
                                     csv_detail::format_double(zs[r]));
    ProbabilityField field;
    field.z_mm = zs;
    field.p.resize(static_cast<int>(rows.size()), static_cast<int>(n_sites));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < n_sites; ++c)
            field.p(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    return field;
}

inline void write_records_csv(std::ostream& out,
                              const std::vector<DetectionRecord>& records) {
    out << "gate,d1,d2,d3\n";
    for (const DetectionRecord& rec : records)
        out << rec.gate << ',' << (rec.d1 ? 1 : 0) << ',' << (rec.d2 ? 1 : 0) << ','
            << (rec.d3 ? 1 : 0) << "\n";
}

inline void write_estimates_csv(std::ostream& out,
                                const std::vector<CorrelationEstimate>& estimates) {
    out << "estimator,value,stderr,n_gates,n1,n2,n3,n12,n13,n23,n123\n";
    for (const CorrelationEstimate& est : estimates) {
        const ClickCounts& c = est.counts;
        out << est.estimator << ',' << csv_detail::format_double(est.value) << ','
            << csv_detail::format_double(est.std_error) << ',' << c.n_gates << ','
            << c.n1() << ',' << c.n2() << ',' << c.n3() << ',' << c.n12() << ','
            << c.n13() << ',' << c.n23() << ',' << c.n123() << "\n";
    }
}

// Path-based wrappers used by the CLI.

inline void write_sweep_csv(const std::string& path, const SweepResult& result) {
    csv_detail::write_file(path, [&](std::ostream& out) { write_sweep_csv(out, result); });
}

inline SweepResult read_sweep_csv(const std::string& path) {
    return csv_detail::read_file(path, [](std::istream& in) { return read_sweep_csv(in); });
}

inline void write_field_csv(const std::string& path, const ProbabilityField& field) {
    csv_detail::write_file(path, [&](std::ostream& out) { write_field_csv(out, field); });
}

inline ProbabilityField read_field_csv(const std::string& path) {
    return csv_detail::read_file(path, [](std::istream& in) { return read_field_csv(in); });
}

inline void write_records_csv(const std::string& path,
                              const std::vector<DetectionRecord>& records) {
    csv_detail::write_file(path,
                           [&](std::ostream& out) { write_records_csv(out, records); });
}

inline void write_estimates_csv(const std::string& path,
                                const std::vector<CorrelationEstimate>& estimates) {
    csv_detail::write_file(
        path, [&](std::ostream& out) { write_estimates_csv(out, estimates); });
}

}  // namespace cradle
