// CSV/JSON emission. Floating-point values are serialized with 17
// significant digits so a re-parse reproduces them bit for bit. CSV starts
// with a '#'-prefixed metadata line recording model, parameters, seed and
// tool version; JSON carries the same metadata as fields.

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mmselab/oracle.hpp"
#include "mmselab/sweep.hpp"

namespace mmselab::emit {

inline constexpr const char* kToolVersion = "mmselab 1.0.0";

enum class Format { csv, json };

struct Metadata {
    std::string model;
    std::vector<std::pair<std::string, std::string>> params;  // ordered key=value
    std::uint64_t seed = 0;

    void add(const std::string& key, double value);
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, std::int64_t value);
};

// 17-significant-digit round-trippable formatting ("%.17g").
std::string format_double(double v);

void write_curve(std::ostream& os, Format fmt, const Metadata& meta,
                 const std::vector<sweep::CurvePoint>& curve);

void write_transitions(std::ostream& os, Format fmt, const Metadata& meta,
                       const sweep::TransitionReport& report);

struct OracleRow {
    double beta;
    double psi_per_n, psi_se;
    double i_per_n;
    double mmse_per_n, mmse_se;
};

void write_oracle_rows(std::ostream& os, Format fmt, const Metadata& meta,
                       const std::vector<OracleRow>& rows);

struct CompareRow {
    double beta;
    double asymptotic_mmse;
    double oracle_mmse;
    double std_err;
    double z;      // (oracle - asymptotic) / std_err
    bool exact;    // asymptotics exact at finite n on this branch
};

void write_compare_rows(std::ostream& os, Format fmt, const Metadata& meta,
                        const std::vector<CompareRow>& rows);

// Opens `path` (or stdout for "-"/""), writes via `fn`, reports io errors
// with the offending path.
void write_to(const std::string& path, const std::function<void(std::ostream&)>& fn);

}  // namespace mmselab::emit
