#include <doctest.h>

#include <cmath>

#include "mmselab/numerics.hpp"
#include "mmselab/sphere.hpp"
#include "mmselab/tree.hpp"

using namespace mmselab;

namespace {
const tree::TreeParams kSplit{0.5, 0.2, 0.8};   // R1 < R2
const tree::TreeParams kFlat{0.5, 0.8, 0.2};    // R1 > R2, same average rate
}  // namespace

TEST_CASE("beta_of_rate") {
    CHECK(tree::beta_of_rate(0.5) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK(tree::beta_of_rate(std::log(2.0)) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(tree::beta_of_rate(1e-12) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("count exponent closed form") {
    // r = 0 gives the full rate for the flat case
    CHECK(tree::count_exponent(kFlat, 0.0) == doctest::Approx(kFlat.rate()).epsilon(1e-14));
    // continuity at the knee rho(R1) in the split case
    const double knee = tree::rho_of_rate(kSplit.r1);
    const double below = tree::count_exponent(kSplit, knee - 1e-10);
    const double above = tree::count_exponent(kSplit, knee + 1e-10);
    CHECK(std::abs(below - above) < 1e-8);
    // support edge
    const double edge =
        kSplit.lambda1 * tree::rho_of_rate(kSplit.r1) + kSplit.lambda2() * tree::rho_of_rate(kSplit.r2);
    CHECK(std::isinf(tree::count_exponent(kSplit, edge + 1e-9)));
    CHECK(tree::count_exponent(kSplit, edge - 1e-9) > -1e-6);
}

TEST_CASE("count exponent: closed form vs inner maximization on random draws") {
    num::RngStream rng(5150, 0);
    for (int i = 0; i < 1000; ++i) {
        tree::TreeParams p;
        p.lambda1 = 0.1 + 0.8 * rng.next_uniform();
        p.r1 = 0.05 + 1.2 * rng.next_uniform();
        p.r2 = 0.05 + 1.2 * rng.next_uniform();
        const double r = -1.0 + 2.0 * rng.next_uniform();
        const double a = tree::count_exponent(p, r);
        const double b = tree::count_exponent_by_max(p, r);
        if (std::isinf(a) || std::isinf(b)) {
            // empty region must agree except within a hair of the edge
            if (std::isinf(a) != std::isinf(b)) {
                CHECK(std::abs(std::isinf(a) ? b : a) < 1e-6);
            }
        } else {
            CHECK(std::abs(a - b) < 1e-8);
        }
    }
}

TEST_CASE("free energy values in the split middle regime") {
    // beta = 1 sits between beta(0.2) and beta(0.8)
    const double psi = tree::free_energy_per_n(kSplit, 1.0).psi_per_n;
    CHECK(psi == doctest::Approx(0.1 + 0.5 * 0.5 * std::log(2.0) + 0.5).epsilon(1e-12));
    CHECK(tree::free_energy_per_n(kSplit, 1.0).branch == tree::Branch::segment1_only);
    // saturation
    const double b2 = tree::beta_of_rate(kSplit.r2);
    CHECK(tree::free_energy_per_n(kSplit, b2 * 1.01).psi_per_n ==
          doctest::Approx(kSplit.rate() + 0.5).epsilon(1e-12));
}

TEST_CASE("flat case equals the average-rate sphere ensemble") {
    const sphere::SphereParams eq{1.0, kFlat.rate()};
    for (double beta = 0.05; beta < 20.0; beta *= 1.37) {
        CHECK(std::abs(tree::free_energy_per_n(kFlat, beta).psi_per_n -
                       sphere::free_energy_per_n(eq, beta).psi_per_n) < 1e-10);
        CHECK(std::abs(tree::mmse_per_n(kFlat, beta) - sphere::mmse_per_n(eq, beta)) < 1e-10);
    }
    // explicit spot check below the transition
    CHECK(tree::mmse_per_n(kFlat, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mmse branch values for the split case") {
    CHECK(tree::mmse_per_n(kSplit, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(tree::mmse_per_n(kSplit, 5.0) == 0.0);
    CHECK(tree::beta_of_rate(kSplit.r1) == doctest::Approx(0.49182).epsilon(1e-4));
    CHECK(tree::beta_of_rate(kSplit.r2) == doctest::Approx(3.95303).epsilon(1e-4));
}

TEST_CASE("2 dpsi/dbeta equals the mmse away from kinks") {
    for (const tree::TreeParams& p : {kSplit, kFlat}) {
        for (double beta : {0.2, 1.0, 2.0, 6.0}) {
            const double h = 1e-6 * beta;
            const double fd = (tree::free_energy_per_n(p, beta + h).psi_per_n -
                               tree::free_energy_per_n(p, beta - h).psi_per_n) /
                              (2.0 * h);
            CHECK(std::abs(2.0 * fd - tree::mmse_per_n(p, beta)) < 1e-6);
        }
    }
}

TEST_CASE("the two dichotomy formulas coincide at R1 = R2") {
    const tree::TreeParams eq_hi{0.4, 0.5 + 1e-13, 0.5};
    const tree::TreeParams eq_lo{0.4, 0.5 - 1e-13, 0.5};
    for (double beta = 0.05; beta < 30.0; beta *= 1.41) {
        CHECK(std::abs(tree::free_energy_per_n(eq_hi, beta).psi_per_n -
                       tree::free_energy_per_n(eq_lo, beta).psi_per_n) < 1e-12);
        CHECK(std::abs(tree::mmse_per_n(eq_hi, beta) - tree::mmse_per_n(eq_lo, beta)) < 1e-9);
    }
}

TEST_CASE("psi is continuous in beta across both regimes") {
    for (const tree::TreeParams& p : {kSplit, kFlat}) {
        double prev = tree::free_energy_per_n(p, 0.01).psi_per_n;
        for (double beta = 0.011; beta < 30.0; beta *= 1.002) {
            const double cur = tree::free_energy_per_n(p, beta).psi_per_n;
            CHECK(std::abs(cur - prev) < 2e-3);
            CHECK(cur >= prev - 1e-12);  // nondecreasing
            prev = cur;
        }
    }
}
