// Random codebook drawn uniformly on the sphere of radius sqrt(n px):
// error-term exponent, piecewise free energy and the first-order MMSE
// transition at beta_R where the rate meets capacity.

#pragma once

#include <string_view>

namespace mmselab::sphere {

struct SphereParams {
    double px = 1.0;   // codeword power
    double rate = 0.5; // nats per symbol
};

void validate(const SphereParams& p);

// Derived geometry at a given SNR. p_y is the typical output power, p_a/p_g
// the arithmetic/geometric means of (px, p_y), rho_star the edge of the
// populated correlation range, rho_beta the unconstrained maximizer.
struct SphereGeometry {
    double p_y;
    double p_a;
    double p_g;
    double rho_star;
    double rho_beta;
    double theta;
};

SphereGeometry geometry(const SphereParams& p, double beta);

// Gamma(rho) = 0.5 ln(1 - rho^2); |rho| < 1 required.
double gamma(double rho);

// beta_R = (e^{2R} - 1) / px, where capacity equals the rate.
double beta_r(const SphereParams& p);

enum class Branch { paramagnetic, frozen };  // beta < beta_R / beta >= beta_R
std::string_view branch_name(Branch b);

struct FreeEnergy {
    double psi_per_n;
    Branch branch;
};

// psi/n: 0.5 ln(1 + beta px) + 0.5 below beta_R, R + 0.5 above; continuous
// at the junction. Branch selection is analytic (beta vs beta_R), not a
// numeric exponent comparison.
FreeEnergy free_energy_per_n(const SphereParams& p, double beta);

double mutual_info_per_n(const SphereParams& p, double beta);

// px / (1 + beta px) below beta_R, 0 above: the first-order jump.
double mmse_per_n(const SphereParams& p, double beta);

// Exponent of the error term Z_e, closed form.
double error_exponent(const SphereParams& p, double beta);

// Same exponent via bounded maximization over rho in [-rho_star, rho_star];
// agrees with the closed form to ~1e-8 (used as a cross-check).
double error_exponent_by_max(const SphereParams& p, double beta);

}  // namespace mmselab::sphere
