#include "mmselab/broadcast.hpp"

#include <algorithm>
#include <cmath>

#include "mmselab/errors.hpp"
#include "mmselab/numerics.hpp"

namespace mmselab::bc {

namespace {
double gamma(double rho) { return 0.5 * std::log1p(-rho * rho); }

void check(const BroadcastParams& p, double beta) {
    validate(p);
    require(beta > 0.0 && std::isfinite(beta), errc::invalid_argument, "bc: beta must be > 0");
}
}  // namespace

void validate(const BroadcastParams& p) {
    require(p.r1 > 0.0 && p.r2 > 0.0 && std::isfinite(p.r1) && std::isfinite(p.r2),
            errc::invalid_argument, "bc: rates must be > 0");
    require(p.alpha > 0.0 && p.alpha < 1.0, errc::invalid_argument, "bc: alpha must be in (0,1)");
}

TransitionBetas transition_betas(const BroadcastParams& p) {
    validate(p);
    const double b = p.b();
    const double denom = 1.0 - b * std::exp(2.0 * p.r1);
    require(denom > 0.0, errc::regime_error,
            "bc: cloud rate exceeds cloud channel capacity at all SNR (1 - b e^{2R1} <= 0)");
    TransitionBetas t;
    t.beta1 = std::expm1(2.0 * p.r1) / denom;
    t.beta2 = std::expm1(2.0 * p.r2) / b;
    t.two_transition = t.beta1 < t.beta2;
    return t;
}

double beta2_displayed(const BroadcastParams& p) {
    validate(p);
    return std::expm1(2.0 * p.r2) / (1.0 - p.b());
}

std::string_view branch_name(Branch b) {
    switch (b) {
        case Branch::no_decode: return "no-decode";
        case Branch::cloud_only: return "cloud-only";
        default: return "full-decode";
    }
}

MutualInfo mutual_info_per_n(const BroadcastParams& p, double beta) {
    check(p, beta);
    const TransitionBetas t = transition_betas(p);
    const double v_no = 0.5 * std::log1p(beta);
    const double v_cloud = p.r1 + 0.5 * std::log1p(beta * p.b());
    const double v_full = p.rate();
    if (t.two_transition) {
        if (beta < t.beta1) return {v_no, Branch::no_decode};
        if (beta < t.beta2) return {v_cloud, Branch::cloud_only};
        return {v_full, Branch::full_decode};
    }
    // single-transition regime: the cloud branch is never the lower envelope
    if (v_no <= v_full) return {v_no, Branch::no_decode};
    return {v_full, Branch::full_decode};
}

double mmse_per_n(const BroadcastParams& p, double beta) {
    switch (mutual_info_per_n(p, beta).branch) {
        case Branch::no_decode: return 1.0 / (1.0 + beta);
        case Branch::cloud_only: return p.b() / (1.0 + beta * p.b());
        default: return 0.0;
    }
}

double psi_e1(const BroadcastParams& p, double beta) {
    check(p, beta);
    const double b = p.b();
    const double a = b + 1.0 / beta;
    const double p_a = 0.5 * (a + b);
    const double p_g = std::sqrt(a * b);
    const double rho2 = std::sqrt(-std::expm1(-2.0 * p.r2));
    const double beta_r2 = std::expm1(2.0 * p.r2) / b;
    if (beta < beta_r2) {
        const double theta = 1.0 / (2.0 * beta * p_g);
        const double rho_beta = std::sqrt(1.0 + theta * theta) - theta;
        return p.r1 - gamma(rho_beta) + beta * (p_a - rho_beta * p_g);
    }
    return p.rate() + beta * (p_a - rho2 * p_g);
}

Psi2Solution psi_e2(const BroadcastParams& p, double beta) {
    check(p, beta);
    const double alpha2 = p.alpha * p.alpha;
    const double one_minus_a2 = 1.0 - alpha2;
    const double p_a = 0.5 * (1.0 + 1.0 / beta + alpha2);
    const double p_g = p.alpha * std::sqrt(1.0 + 1.0 / beta);
    const double rho1 = std::sqrt(-std::expm1(-2.0 * p.r1));
    const double e2r = std::exp(-2.0 * p.rate());

    // rho2(r1) is real only while 1 - r1^2 >= e^{-2R}; the outer domain is
    // clipped there, which keeps the objective finite everywhere.
    const double r1_cap = std::min(rho1, std::sqrt(1.0 - e2r));

    const auto inner_best = [&](double r1) {
        // maximize 0.5 ln(1-r2^2) + beta*c*r2 over |r2| <= rho2(r1):
        // unconstrained stationary point clipped at the feasible edge.
        const double rho2sq = 1.0 - e2r / (1.0 - r1 * r1);
        const double rho2 = std::sqrt(std::max(0.0, rho2sq));
        const double c = std::sqrt(std::max(0.0, 2.0 * one_minus_a2 * (p_a - r1 * p_g)));
        double r2;
        if (beta * c < 1e-300) {
            r2 = 0.0;
        } else {
            const double theta = 1.0 / (2.0 * beta * c);
            r2 = std::min(std::sqrt(1.0 + theta * theta) - theta, rho2);
        }
        return std::pair<double, double>{r2, c};
    };

    const auto objective = [&](double r1) {
        const auto [r2, c] = inner_best(r1);
        return gamma(r1) + gamma(r2) -
               beta * (0.5 * one_minus_a2 + p_a - r1 * p_g - r2 * c);
    };

    const num::MaxResult best = num::maximize_1d(objective, -r1_cap, r1_cap, 1e-13, 1024);

    Psi2Solution s;
    s.r1_opt = best.argmax;
    const auto [r2, c] = inner_best(best.argmax);
    s.r2_opt = r2;
    s.value = -best.max;
    const double rho2_here = std::sqrt(std::max(0.0, 1.0 - e2r / (1.0 - s.r1_opt * s.r1_opt)));
    s.r1_at_boundary = std::abs(std::abs(s.r1_opt) - r1_cap) < 1e-9;
    s.r2_at_boundary = std::abs(std::abs(s.r2_opt) - rho2_here) < 1e-9;
    return s;
}

FreeEnergy free_energy_per_n(const BroadcastParams& p, double beta) {
    check(p, beta);
    const double psi_c = p.rate() + 0.5;
    const double e1 = psi_e1(p, beta);
    const double e2 = psi_e2(p, beta).value;
    const double m = std::min({psi_c, e1, e2});
    Branch br = Branch::full_decode;
    if (m == e2)
        br = Branch::no_decode;
    else if (m == e1)
        br = Branch::cloud_only;
    return {m, br};
}

CapacityCheck capacity_region_check(const BroadcastParams& p, double gamma1, double gamma2) {
    validate(p);
    require(gamma1 > 0.0 && gamma2 > 0.0, errc::invalid_argument, "bc: gammas must be > 0");
    const double a2 = p.alpha * p.alpha;
    const double b = p.b();
    CapacityCheck c;
    c.margin1 = 0.5 * std::log1p(a2 * gamma1 / (1.0 + b * gamma1)) - p.r1;
    c.margin2 = 0.5 * std::log1p(a2 * gamma2) - p.r2;
    c.margin2_b_form = 0.5 * std::log1p(b * gamma2) - p.r2;
    c.ok1 = c.margin1 > 0.0;
    c.ok2 = c.margin2 > 0.0;
    return c;
}

}  // namespace mmselab::bc
