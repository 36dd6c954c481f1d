#include "mmselab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

#include "mmselab/errors.hpp"

namespace mmselab::emit {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Metadata::add(const std::string& key, double value) {
    params.emplace_back(key, format_double(value));
}

void Metadata::add(const std::string& key, const std::string& value) {
    params.emplace_back(key, value);
}

void Metadata::add(const std::string& key, std::int64_t value) {
    params.emplace_back(key, std::to_string(value));
}

namespace {

void csv_header(std::ostream& os, const Metadata& meta) {
    os << "# model=" << meta.model;
    for (const auto& [k, v] : meta.params) os << " " << k << "=" << v;
    os << " seed=" << meta.seed << " version=\"" << kToolVersion << "\"\n";
}

void json_meta(std::ostream& os, const Metadata& meta) {
    os << "  \"model\": \"" << meta.model << "\",\n  \"params\": {";
    bool first = true;
    for (const auto& [k, v] : meta.params) {
        if (!first) os << ", ";
        first = false;
        // numeric-looking values are emitted bare, everything else quoted
        char* end = nullptr;
        std::strtod(v.c_str(), &end);
        const bool numeric = end && *end == '\0' && !v.empty();
        os << "\"" << k << "\": ";
        if (numeric)
            os << v;
        else
            os << "\"" << v << "\"";
    }
    os << "},\n  \"seed\": " << meta.seed << ",\n  \"version\": \"" << kToolVersion << "\",\n";
}

// one optional field: empty when not applicable
std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

void write_curve(std::ostream& os, Format fmt, const Metadata& meta,
                 const std::vector<sweep::CurvePoint>& curve) {
    if (fmt == Format::csv) {
        csv_header(os, meta);
        os << "beta,psi_per_n,i_per_n,mmse_per_n,m_star,branch\n";
        for (const auto& p : curve) {
            os << format_double(p.beta) << ',' << format_double(p.psi_per_n) << ','
               << format_double(p.i_per_n) << ',' << format_double(p.mmse_per_n) << ','
               << opt(p.m_star) << ',' << p.branch << '\n';
        }
        return;
    }
    os << "{\n";
    json_meta(os, meta);
    os << "  \"points\": [\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& p = curve[i];
        os << "    {\"beta\": " << format_double(p.beta)
           << ", \"psi_per_n\": " << format_double(p.psi_per_n)
           << ", \"i_per_n\": " << format_double(p.i_per_n) << ", \"mmse_per_n\": "
           << (std::isnan(p.mmse_per_n) ? "null" : format_double(p.mmse_per_n))
           << ", \"m_star\": " << (p.m_star ? format_double(*p.m_star) : "null")
           << ", \"branch\": \"" << p.branch << "\"}" << (i + 1 < curve.size() ? "," : "")
           << "\n";
    }
    os << "  ]\n}\n";
}

void write_transitions(std::ostream& os, Format fmt, const Metadata& meta,
                       const sweep::TransitionReport& report) {
    const auto order_name = [](sweep::TransitionOrder o) {
        return o == sweep::TransitionOrder::first ? "first" : "second";
    };
    if (fmt == Format::csv) {
        csv_header(os, meta);
        os << "beta_c,order,left_mmse,right_mmse,branch_left,branch_right\n";
        for (const auto& t : report.transitions) {
            os << format_double(t.beta_c) << ',' << order_name(t.order) << ','
               << format_double(t.left_mmse) << ',' << format_double(t.right_mmse) << ','
               << t.branch_left << ',' << t.branch_right << '\n';
        }
        return;
    }
    os << "{\n";
    json_meta(os, meta);
    os << "  \"transitions\": [\n";
    for (std::size_t i = 0; i < report.transitions.size(); ++i) {
        const auto& t = report.transitions[i];
        os << "    {\"beta_c\": " << format_double(t.beta_c) << ", \"order\": \""
           << order_name(t.order) << "\", \"left_mmse\": " << format_double(t.left_mmse)
           << ", \"right_mmse\": " << format_double(t.right_mmse) << ", \"branch_left\": \""
           << t.branch_left << "\", \"branch_right\": \"" << t.branch_right << "\"}"
           << (i + 1 < report.transitions.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

void write_oracle_rows(std::ostream& os, Format fmt, const Metadata& meta,
                       const std::vector<OracleRow>& rows) {
    if (fmt == Format::csv) {
        csv_header(os, meta);
        os << "beta,psi_per_n,psi_se,i_per_n,mmse_per_n,mmse_se\n";
        for (const auto& r : rows) {
            os << format_double(r.beta) << ',' << format_double(r.psi_per_n) << ','
               << format_double(r.psi_se) << ',' << format_double(r.i_per_n) << ','
               << format_double(r.mmse_per_n) << ',' << format_double(r.mmse_se) << '\n';
        }
        return;
    }
    os << "{\n";
    json_meta(os, meta);
    os << "  \"points\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << "    {\"beta\": " << format_double(r.beta)
           << ", \"psi_per_n\": " << format_double(r.psi_per_n)
           << ", \"psi_se\": " << format_double(r.psi_se)
           << ", \"i_per_n\": " << format_double(r.i_per_n)
           << ", \"mmse_per_n\": " << format_double(r.mmse_per_n)
           << ", \"mmse_se\": " << format_double(r.mmse_se) << "}"
           << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

void write_compare_rows(std::ostream& os, Format fmt, const Metadata& meta,
                        const std::vector<CompareRow>& rows) {
    if (fmt == Format::csv) {
        csv_header(os, meta);
        os << "beta,asymptotic_mmse,oracle_mmse,std_err,z,exact\n";
        for (const auto& r : rows) {
            os << format_double(r.beta) << ',' << format_double(r.asymptotic_mmse) << ','
               << format_double(r.oracle_mmse) << ',' << format_double(r.std_err) << ','
               << format_double(r.z) << ',' << (r.exact ? "1" : "0") << '\n';
        }
        return;
    }
    os << "{\n";
    json_meta(os, meta);
    os << "  \"points\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << "    {\"beta\": " << format_double(r.beta)
           << ", \"asymptotic_mmse\": " << format_double(r.asymptotic_mmse)
           << ", \"oracle_mmse\": " << format_double(r.oracle_mmse)
           << ", \"std_err\": " << format_double(r.std_err) << ", \"z\": " << format_double(r.z)
           << ", \"exact\": " << (r.exact ? "true" : "false") << "}"
           << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path);
    require(os.good(), errc::io_error, "cannot open output file: " + path);
    fn(os);
    os.flush();
    require(os.good(), errc::io_error, "write failed: " + path);
}

}  // namespace mmselab::emit
