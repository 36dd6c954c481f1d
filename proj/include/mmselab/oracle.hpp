// Finite-n ground truth. Small code ensembles are realized explicitly and
// the posterior mean is an exact weighted average over all codewords; the
// sparse model enumerates all 2^n supports with the per-symbol Gaussian
// convolution in closed form. Monte Carlo over channel noise sits on a
// fixed batch schedule (batch k always uses RngStream(seed, k)), so results
// are byte-identical for any thread count.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mmselab/numerics.hpp"
#include "mmselab/sparse.hpp"

namespace mmselab::oracle {

struct SphereCodeSpec {
    int n;
    double rate;
    double px;
    std::uint64_t seed;
};

struct BroadcastCodeSpec {
    int n;
    double r1, r2, alpha;
    std::uint64_t seed;
};

struct TreeCodeSpec {
    int n;
    double lambda1, r1, r2;
    std::uint64_t seed;
};

struct SparseSpec {
    int n;
    double sigma2;
    sparse::PriorExponent prior;
};

using FiniteInstance = std::variant<SphereCodeSpec, BroadcastCodeSpec, TreeCodeSpec, SparseSpec>;

// Enumeration guards: codebooks up to 2^20 codewords, sparse supports up to
// 2^24. Violations raise too-large.
inline constexpr std::int64_t kMaxCodebook = 1 << 20;
inline constexpr int kMaxSparseBits = 24;

struct OracleEstimate {
    double value = 0.0;
    double std_err = 0.0;
    int n = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

struct PosteriorMean {
    std::vector<double> xhat;
    double ln_z;
};

// A realized instance: the concrete codebook (codes) or the support tables
// (sparse). Realization is deterministic in the spec.
class Instance {
  public:
    static Instance realize(const FiniteInstance& spec);

    int n() const { return n_; }
    std::int64_t codebook_size() const { return static_cast<std::int64_t>(rows_ ? rows_ : 0); }
    bool is_sparse() const { return sparse_.has_value(); }

    // Draws a signal vector from the instance prior.
    void draw_signal(num::RngStream& rng, std::span<double> x) const;

    // Exact posterior mean and log partition value at SNR beta.
    PosteriorMean posterior_mean(std::span<const double> y, double beta) const;

  private:
    struct SparseTables {
        double sigma2;
        sparse::PriorExponent prior;
        std::vector<double> log_prior_by_count;  // ln P(support count = k), normalized
        std::vector<double> log_nf_by_count;     // n f(1 - 2k/n)
        double ln_cn;                            // exact finite-n normalizer
    };

    int n_ = 0;
    std::size_t rows_ = 0;
    std::vector<double> codewords_;  // rows_ x n_, row-major
    std::optional<SparseTables> sparse_;
};

// Monte Carlo E||X - E(X|Y)||^2 / n.
OracleEstimate mmse(const FiniteInstance& spec, double beta, std::int64_t samples,
                    std::uint64_t seed);

// Monte Carlo -E ln Z / n (the free energy psi/n); i_per_n = -1/2 + value.
OracleEstimate free_energy(const FiniteInstance& spec, double beta, std::int64_t samples,
                           std::uint64_t seed);

// Joint estimates for the covariance identity: mmse, n/beta + Cov, Delta.
// Identity deviations are measured per batch, so their standard errors
// account for the correlation between the two sides.
struct IdentitySuite {
    OracleEstimate mmse_per_n;
    double raw_noise_per_n = 0.0;  // 1/beta
    double cov_per_n = 0.0, cov_se_per_n = 0.0;
    double delta_per_n = 0.0, delta_se_per_n = 0.0;
    double mean_ln_z_per_n = 0.0;
    double i_per_n = 0.0;      // -1/2 - E ln Z / n
    double sigma_per_n = 0.0;  // (beta/2) Cov/n - I/n
    // mmse - (1/beta + Cov/n) and Delta/n + Cov/n, with batch-mean errors
    double mmse_identity_dev = 0.0, mmse_identity_se = 0.0;
    double delta_identity_dev = 0.0, delta_identity_se = 0.0;
    bool mmse_identity_ok = false;
    bool delta_identity_ok = false;
};

IdentitySuite identity_suite(const FiniteInstance& spec, double beta, std::int64_t samples,
                             std::uint64_t seed);

// MMSE and free-energy estimates over a beta grid with common random
// numbers: every batch replays the same (X, W) draws at each beta and
// scales the noise, which smooths the empirical curve across the sweep.
struct SweepEstimate {
    OracleEstimate mmse;         // E||X - E(X|Y)||^2 / n
    OracleEstimate free_energy;  // -E ln Z / n
};

std::vector<SweepEstimate> sweep_estimates(const FiniteInstance& spec,
                                           std::span<const double> betas, std::int64_t samples,
                                           std::uint64_t seed);

}  // namespace mmselab::oracle
