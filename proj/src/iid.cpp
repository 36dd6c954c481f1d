#include "mmselab/iid.hpp"

#include <cmath>

#include "mmselab/errors.hpp"

namespace mmselab::iid {

void validate(const IidParams& p) {
    require(p.px >= 0.0 && std::isfinite(p.px), errc::invalid_argument,
            "iid: px must be finite and >= 0");
}

namespace {
void check(const IidParams& p, double beta) {
    validate(p);
    require(beta > 0.0 && std::isfinite(beta), errc::invalid_argument, "iid: beta must be > 0");
}
}  // namespace

double free_energy_per_n(const IidParams& p, double beta) {
    check(p, beta);
    return 0.5 * std::log1p(beta * p.px) + 0.5;
}

double mutual_info_per_n(const IidParams& p, double beta) {
    check(p, beta);
    return 0.5 * std::log1p(beta * p.px);
}

double mmse_per_n(const IidParams& p, double beta) {
    check(p, beta);
    return p.px / (1.0 + beta * p.px);
}

DeltaFisher delta_and_fisher(const IidParams& p, double beta) {
    check(p, beta);
    const double denom = 1.0 + beta * p.px;
    return {1.0 / (beta * denom), beta / denom};
}

double sigma_per_n(const IidParams& p, double beta) {
    check(p, beta);
    // (beta/2) Cov/n - I/n with Cov/n = -delta/n
    return -0.5 / (1.0 + beta * p.px) - 0.5 * std::log1p(beta * p.px);
}

}  // namespace mmselab::iid
