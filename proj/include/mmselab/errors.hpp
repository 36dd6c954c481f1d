// Error taxonomy shared by all modules. Each failure mode maps to a CLI
// exit code: invalid arguments -> 2, regime/guard violations -> 3,
// oracle-mismatch -> 4.

#pragma once

#include <stdexcept>
#include <string>

namespace mmselab {

enum class errc {
    invalid_argument,
    domain_error,
    out_of_range,
    numeric_failure,
    insufficient_data,
    unsupported_model,
    regime_error,
    too_large,
    ambiguous_phase,
    io_error,
    internal_error,
};

class error : public std::runtime_error {
  public:
    error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    errc kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
            case errc::invalid_argument:
            case errc::domain_error:
            case errc::out_of_range:
                return 2;
            default:
                return 3;
        }
    }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw error(kind, what); }

inline void require(bool cond, errc kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace mmselab
