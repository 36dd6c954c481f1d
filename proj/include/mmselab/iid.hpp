// Gaussian i.i.d. input: the closed-form reference model. Free energy,
// MMSE, noise suppression and Fisher trace all have elementary expressions,
// which makes this the anchor for validating the generic relation
// machinery.

#pragma once

namespace mmselab::iid {

struct IidParams {
    double px = 1.0;  // prior variance; px = 0 is the degenerate all-zero signal
};

void validate(const IidParams& p);

// psi/n = -E ln Z / n = 0.5 ln(1 + beta px) + 0.5
double free_energy_per_n(const IidParams& p, double beta);

// I/n = psi/n - 1/2
double mutual_info_per_n(const IidParams& p, double beta);

// mmse/n = px / (1 + beta px)
double mmse_per_n(const IidParams& p, double beta);

struct DeltaFisher {
    double delta_per_n;   // E||Y - E(X|Y)||^2 / n = 1 / (beta (1 + beta px))
    double fisher_per_n;  // tr{J(Y)} / n = beta / (1 + beta px) = beta^2 * delta
};

DeltaFisher delta_and_fisher(const IidParams& p, double beta);

// Effective entropy Sigma(beta)/n = (beta/2) Cov/n - I/n; closed form used by
// the heat-integral cross-check.
double sigma_per_n(const IidParams& p, double beta);

}  // namespace mmselab::iid
