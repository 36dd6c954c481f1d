// Two-segment tree-structured code (unit input power). The typical-number
// exponent of codeword pairs at a given output correlation drives a
// dichotomy: for R1 > R2 the ensemble behaves like a flat sphere code at
// the average rate; for R1 < R2 the two segments decode separately and the
// MMSE steps down twice.

#pragma once

#include <string_view>

namespace mmselab::tree {

struct TreeParams {
    double lambda1 = 0.5;  // first-segment fraction, in (0,1)
    double r1 = 0.2;       // first-segment rate (nats/symbol)
    double r2 = 0.8;       // second-segment rate (nats/symbol)

    double lambda2() const { return 1.0 - lambda1; }
    double rate() const { return lambda1 * r1 + lambda2() * r2; }
};

void validate(const TreeParams& p);

// beta solving C(beta) = r for C(beta) = 0.5 ln(1 + beta): e^{2r} - 1.
double beta_of_rate(double r);

// rho(x) = sqrt(1 - e^{-2x}), the populated-correlation edge at rate x.
double rho_of_rate(double x);

// Exponent of the typical number of codeword pairs with total correlation r
// against the output; -inf where no codewords exist. Piecewise closed form.
double count_exponent(const TreeParams& p, double r);

// Same quantity via the inner maximization over the first-segment
// correlation; cross-check for the closed form.
double count_exponent_by_max(const TreeParams& p, double r);

enum class Branch { no_decode, segment1_only, full_decode };
std::string_view branch_name(Branch b);

struct FreeEnergy {
    double psi_per_n;
    Branch branch;
};

FreeEnergy free_energy_per_n(const TreeParams& p, double beta);

double mutual_info_per_n(const TreeParams& p, double beta);

double mmse_per_n(const TreeParams& p, double beta);

}  // namespace mmselab::tree
