#include "mmselab/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmselab/errors.hpp"
#include "mmselab/numerics.hpp"

namespace mmselab::tree {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double capacity(double beta) { return 0.5 * std::log1p(beta); }

double gamma(double rho) { return 0.5 * std::log1p(-rho * rho); }
}  // namespace

void validate(const TreeParams& p) {
    require(p.lambda1 > 0.0 && p.lambda1 < 1.0, errc::invalid_argument,
            "tree: lambda1 must lie in (0,1)");
    require(p.r1 > 0.0 && p.r2 > 0.0 && std::isfinite(p.r1) && std::isfinite(p.r2),
            errc::invalid_argument, "tree: rates must be > 0");
}

double beta_of_rate(double r) {
    require(r > 0.0 && std::isfinite(r), errc::invalid_argument, "tree: rate must be > 0");
    return std::expm1(2.0 * r);
}

double rho_of_rate(double x) { return std::sqrt(-std::expm1(-2.0 * x)); }

double count_exponent(const TreeParams& p, double r) {
    validate(p);
    require(std::abs(r) <= 1.0, errc::invalid_argument, "tree: |r| must be <= 1");
    const double ar = std::abs(r);
    const double l1 = p.lambda1, l2 = p.lambda2();
    const double rho1 = rho_of_rate(p.r1);
    const double total = p.rate();

    // Unclipped branch: both segment correlations sit at r.
    if (ar <= rho1) {
        const double v = total + gamma(r);
        return v >= 0.0 ? v : kNegInf;
    }
    // First segment clipped at its populated edge rho(R1); the remaining
    // correlation is carried by the second segment alone.
    const double edge = l1 * rho1 + l2 * rho_of_rate(p.r2);
    if (ar > edge) return kNegInf;
    const double r2c = (ar - l1 * rho1) / l2;
    if (std::abs(r2c) >= 1.0) return kNegInf;
    return l2 * (p.r2 + gamma(r2c));
}

double count_exponent_by_max(const TreeParams& p, double r) {
    validate(p);
    require(std::abs(r) <= 1.0, errc::invalid_argument, "tree: |r| must be <= 1");
    const double l1 = p.lambda1, l2 = p.lambda2();
    const double rho1 = rho_of_rate(p.r1);
    // |r1| <= rho(R1) and |(r - l1 r1)/l2| <= 1
    const double lo = std::max(-rho1, (r - l2) / l1);
    const double hi = std::min(rho1, (r + l2) / l1);
    if (lo > hi) return kNegInf;
    const auto objective = [&](double r1) {
        const double r2 = (r - l1 * r1) / l2;
        if (std::abs(r2) >= 1.0 || std::abs(r1) >= 1.0) return kNegInf;
        return l1 * (p.r1 + gamma(r1)) + l2 * (p.r2 + gamma(r2));
    };
    double v;
    if (lo == hi)
        v = objective(lo);
    else
        v = num::maximize_1d(objective, lo, hi, 1e-13, 2048).max;
    return v >= 0.0 ? v : kNegInf;
}

std::string_view branch_name(Branch b) {
    switch (b) {
        case Branch::no_decode: return "no-decode";
        case Branch::segment1_only: return "segment1-only";
        default: return "full-decode";
    }
}

FreeEnergy free_energy_per_n(const TreeParams& p, double beta) {
    validate(p);
    require(beta > 0.0 && std::isfinite(beta), errc::invalid_argument, "tree: beta must be > 0");
    const double c = capacity(beta);
    if (p.r1 > p.r2) {
        // behaves as the flat ensemble at the average rate
        const double total = p.rate();
        return {std::min(total, c) + 0.5, c >= total ? Branch::full_decode : Branch::no_decode};
    }
    const double psi = p.lambda1 * std::min(p.r1, c) + p.lambda2() * std::min(p.r2, c) + 0.5;
    Branch br = Branch::no_decode;
    if (c >= p.r2)
        br = Branch::full_decode;
    else if (c >= p.r1)
        br = Branch::segment1_only;
    return {psi, br};
}

double mutual_info_per_n(const TreeParams& p, double beta) {
    return free_energy_per_n(p, beta).psi_per_n - 0.5;
}

double mmse_per_n(const TreeParams& p, double beta) {
    validate(p);
    require(beta > 0.0 && std::isfinite(beta), errc::invalid_argument, "tree: beta must be > 0");
    if (p.r1 > p.r2) {
        // flat-ensemble transition at beta(R)
        return beta < beta_of_rate(p.rate()) ? 1.0 / (1.0 + beta) : 0.0;
    }
    if (beta <= beta_of_rate(p.r1)) return 1.0 / (1.0 + beta);
    if (beta <= beta_of_rate(p.r2)) return p.lambda2() / (1.0 + beta);
    return 0.0;
}

}  // namespace mmselab::tree
