#include "mmselab/sphere.hpp"

#include <cmath>

#include "mmselab/errors.hpp"
#include "mmselab/numerics.hpp"

namespace mmselab::sphere {

void validate(const SphereParams& p) {
    require(p.px > 0.0 && std::isfinite(p.px), errc::invalid_argument, "sphere: px must be > 0");
    require(p.rate > 0.0 && std::isfinite(p.rate), errc::invalid_argument,
            "sphere: rate must be > 0");
}

namespace {
void check(const SphereParams& p, double beta) {
    validate(p);
    require(beta > 0.0 && std::isfinite(beta), errc::invalid_argument, "sphere: beta must be > 0");
}
}  // namespace

double gamma(double rho) {
    require(std::abs(rho) < 1.0, errc::domain_error, "gamma: |rho| must be < 1");
    return 0.5 * std::log1p(-rho * rho);
}

double beta_r(const SphereParams& p) {
    validate(p);
    return std::expm1(2.0 * p.rate) / p.px;
}

SphereGeometry geometry(const SphereParams& p, double beta) {
    check(p, beta);
    SphereGeometry g;
    g.p_y = p.px + 1.0 / beta;
    g.p_a = 0.5 * (p.px + g.p_y);
    g.p_g = std::sqrt(p.px * g.p_y);
    g.rho_star = std::sqrt(-std::expm1(-2.0 * p.rate));
    g.theta = 1.0 / (2.0 * beta * g.p_g);
    g.rho_beta = std::sqrt(1.0 + g.theta * g.theta) - g.theta;
    return g;
}

std::string_view branch_name(Branch b) {
    return b == Branch::paramagnetic ? "paramagnetic" : "frozen";
}

FreeEnergy free_energy_per_n(const SphereParams& p, double beta) {
    check(p, beta);
    if (beta < beta_r(p)) return {0.5 * std::log1p(beta * p.px) + 0.5, Branch::paramagnetic};
    return {p.rate + 0.5, Branch::frozen};
}

double mutual_info_per_n(const SphereParams& p, double beta) {
    return free_energy_per_n(p, beta).psi_per_n - 0.5;
}

double mmse_per_n(const SphereParams& p, double beta) {
    check(p, beta);
    return beta < beta_r(p) ? p.px / (1.0 + beta * p.px) : 0.0;
}

double error_exponent(const SphereParams& p, double beta) {
    const SphereGeometry g = geometry(p, beta);
    if (beta < beta_r(p)) return gamma(g.rho_beta) - beta * (g.p_a - g.rho_beta * g.p_g);
    return -p.rate - beta * (g.p_a - g.rho_star * g.p_g);
}

double error_exponent_by_max(const SphereParams& p, double beta) {
    const SphereGeometry g = geometry(p, beta);
    const auto objective = [&](double rho) {
        return 0.5 * std::log1p(-rho * rho) - beta * (g.p_a - rho * g.p_g);
    };
    return num::maximize_1d(objective, -g.rho_star, g.rho_star, 1e-13).max;
}

}  // namespace mmselab::sphere
