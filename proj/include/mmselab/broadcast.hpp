// Superposition (cloud + refinement) ensemble with unit input power.
// The partition function splits into the correct-codeword term, the
// same-cloud error term and the other-cloud error term; the last one needs
// a nested two-variable maximization. The mutual information is piecewise
// with first-order MMSE jumps at beta1 (cloud decodable) and beta2 (both
// messages decodable).

#pragma once

#include <string_view>

namespace mmselab::bc {

struct BroadcastParams {
    double r1 = 0.1;      // cloud rate (nats/symbol)
    double r2 = 0.6206;   // refinement rate (nats/symbol)
    double alpha = 0.7129;  // cloud power split, in (0,1)

    double b() const { return 1.0 - alpha * alpha; }
    double rate() const { return r1 + r2; }
};

void validate(const BroadcastParams& p);

struct TransitionBetas {
    double beta1;
    double beta2;
    bool two_transition;  // beta1 < beta2; otherwise the middle branch is empty
};

// beta1 = (e^{2R1}-1)/(1 - b e^{2R1}); beta2 = (e^{2R2}-1)/b. The beta2
// denominator is b (not the 1-b some derivations show): continuity of the
// piecewise I/n at beta2 forces 0.5 ln(1+beta2 b) = R2, and the in-cloud
// threshold beta(R2) has the same form. beta2_displayed carries the 1-b
// variant for debug comparison.
TransitionBetas transition_betas(const BroadcastParams& p);
double beta2_displayed(const BroadcastParams& p);

enum class Branch { no_decode, cloud_only, full_decode };
std::string_view branch_name(Branch b);

struct MutualInfo {
    double value;
    Branch branch;
};

// 0.5 ln(1+beta) below beta1; R1 + 0.5 ln(1+beta b) between; R1+R2 above.
MutualInfo mutual_info_per_n(const BroadcastParams& p, double beta);

// 1/(1+beta), b/(1+beta b), 0 on the three branches.
double mmse_per_n(const BroadcastParams& p, double beta);

// Exponent of the same-cloud error term (plus correct term handled by the
// caller); in-cloud geometry a = b + 1/beta, P_a = (a+b)/2, P_g = sqrt(ab).
double psi_e1(const BroadcastParams& p, double beta);

struct Psi2Solution {
    double r1_opt;
    double r2_opt;
    double value;  // psi_e2 = -max{...}; +inf when the feasible box is empty
    bool r1_at_boundary;
    bool r2_at_boundary;
};

// Other-cloud exponent: outer grid+golden over the cloud correlation r1,
// inner closed-form maximizer over r2 clipped to the feasible edge.
Psi2Solution psi_e2(const BroadcastParams& p, double beta);

struct FreeEnergy {
    double psi_per_n;  // min over the three branch exponents
    Branch branch;
};

// Numerically assembled free energy min(psi_c, psi_e1, psi_e2); matches
// R(branch formulas) + 1/2 on the piecewise display.
FreeEnergy free_energy_per_n(const BroadcastParams& p, double beta);

struct CapacityCheck {
    bool ok1;        // R1 < 0.5 ln(1 + a^2 g1 / (1 + (1-a^2) g1))
    bool ok2;        // R2 < 0.5 ln(1 + a^2 g2), the displayed form
    double margin1;  // rhs - lhs of the first inequality
    double margin2;
    double margin2_b_form;  // same with b in place of a^2; consistent with beta2
};

// Implements the two displayed capacity-region inequalities verbatim. The
// second uses alpha^2 inside the log although the rest of the development
// works with b = 1 - alpha^2; margin2_b_form reports the b-convention value
// so callers can see both.
CapacityCheck capacity_region_check(const BroadcastParams& p, double gamma1, double gamma2);

}  // namespace mmselab::bc
