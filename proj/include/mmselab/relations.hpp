// General identities connecting the MMSE, the free energy, the covariance
// correction, the noise suppression level and the Fisher trace, plus the
// heat-integral representation of the free energy. Usable in closed form
// (Gaussian i.i.d.) and in Monte Carlo form against any enumerable
// instance.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mmselab/iid.hpp"
#include "mmselab/oracle.hpp"

namespace mmselab::relations {

struct FreeEnergyCurve {
    std::vector<double> betas;      // strictly increasing, positive
    std::vector<double> psi_per_n;  // -E ln Z / n
};

// 2 dpsi/dbeta by central difference at an interior grid index.
double mmse_from_free_energy(const FreeEnergyCurve& curve, std::size_t index);

// One-sided slopes around an index (left/right MMSE limits at a kink).
struct OneSided {
    double left;
    double right;
};
OneSided mmse_one_sided(const FreeEnergyCurve& curve, std::size_t index);

struct PairedSample {
    double err_sq;  // ||y - x||^2
    double ln_z;    // ln Z(beta | y)
};

struct RelationReport {
    double mmse_per_n = 0.0, mmse_se_per_n = 0.0;
    double raw_noise_per_n = 0.0;                      // 1/beta
    double covariance_term_per_n = 0.0, covariance_se_per_n = 0.0;
    double identity_value_per_n = 0.0;                 // 1/beta + Cov/n
    double delta_per_n = 0.0, delta_se_per_n = 0.0;    // -Cov/n unless measured directly
    double fisher_trace_per_n = 0.0;                   // tr{J}/n
    double sigma_beta_per_n = 0.0;                     // (beta/2) Cov/n - I/n
    bool identity_ok = true;                           // |mmse - identity| <= 3 combined se
    bool fisher_identity_ok = true;                    // tr{J} == beta^2 Delta within tol
};

// Checks mmse = n/beta + Cov{||Y-X||^2, ln Z} on externally drawn pairs.
// The direct MMSE estimate cannot be formed from the pairs alone, so it is
// passed in (value and standard error); Sigma(beta) is computed from the
// same sample set. Requires >= 1000 pairs.
RelationReport covariance_identity_check(std::span<const PairedSample> samples, double beta,
                                         int n, double direct_mmse_per_n,
                                         double direct_mmse_se_per_n);

// Delta = E||Y - E(X|Y)||^2 / n against tr{J(Y)}/(n beta^2). Closed form for
// the i.i.d. Gaussian model (identity exact); score-based Monte Carlo for
// enumerable instances, where the score is a central finite difference of
// ln Z in each coordinate - a route independent of the posterior-mean
// formula it is checked against.
RelationReport fisher_delta_identity(const iid::IidParams& p, double beta);
RelationReport fisher_delta_identity(const oracle::FiniteInstance& inst, double beta,
                                     std::int64_t samples, std::uint64_t seed);

// beta * e0 - beta * int_beta^beta_max entropy_like(t)/t^2 dt. The tail
// beyond beta_max is estimated from a c*ln(t) + d + e/t fit at the upper
// end and added as a correction; without it the default upper limit of
// 1e3*beta could not reach the 1e-6 agreement the closed forms show.
double sigma_heat_integral(const std::function<double(double)>& entropy_like, double e0_per_n,
                           double beta, double beta_max);

inline double sigma_heat_integral(const std::function<double(double)>& entropy_like,
                                  double e0_per_n, double beta) {
    return sigma_heat_integral(entropy_like, e0_per_n, beta, 1e3 * beta);
}

}  // namespace mmselab::relations
