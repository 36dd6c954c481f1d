#include "mmselab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mmselab/errors.hpp"
#include "mmselab/kernels.hpp"

namespace mmselab::oracle {

namespace {

constexpr std::int64_t kBatchSize = 500;
constexpr std::uint64_t kCodebookStream = std::uint64_t{1} << 63;

std::int64_t code_size(double rate, int length) {
    const double m = std::round(std::exp(rate * length));
    require(m <= static_cast<double>(kMaxCodebook), errc::too_large,
            "oracle: codebook size exceeds the enumeration guard");
    return std::max<std::int64_t>(2, static_cast<std::int64_t>(m));
}

// Uniform point on the sphere of radius sqrt(dim * power): normalized
// Gaussian vector, exact in distribution.
void sphere_point(num::RngStream& rng, double power, std::span<double> x) {
    double norm2 = 0.0;
    for (double& xi : x) {
        xi = rng.next_gaussian();
        norm2 += xi * xi;
    }
    const double scale = std::sqrt(power * x.size() / norm2);
    for (double& xi : x) xi *= scale;
}

double log_binom(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace

// ---------------------------------------------------------------------------
// Realization
// ---------------------------------------------------------------------------

Instance Instance::realize(const FiniteInstance& spec) {
    Instance inst;

    if (const auto* s = std::get_if<SphereCodeSpec>(&spec)) {
        require(s->n >= 1 && s->px > 0 && s->rate > 0, errc::invalid_argument,
                "oracle: malformed sphere spec");
        inst.n_ = s->n;
        const std::int64_t m = code_size(s->rate, s->n);
        inst.rows_ = static_cast<std::size_t>(m);
        inst.codewords_.resize(inst.rows_ * s->n);
        num::RngStream rng(s->seed, kCodebookStream);
        for (std::size_t i = 0; i < inst.rows_; ++i)
            sphere_point(rng, s->px, {&inst.codewords_[i * s->n], static_cast<std::size_t>(s->n)});
        return inst;
    }

    if (const auto* b = std::get_if<BroadcastCodeSpec>(&spec)) {
        require(b->n >= 1 && b->r1 > 0 && b->r2 > 0 && b->alpha > 0 && b->alpha < 1,
                errc::invalid_argument, "oracle: malformed broadcast spec");
        inst.n_ = b->n;
        const std::int64_t m1 = code_size(b->r1, b->n);
        const std::int64_t m2 = code_size(b->r2, b->n);
        require(m1 * m2 <= kMaxCodebook, errc::too_large,
                "oracle: broadcast codebook exceeds the enumeration guard");
        inst.rows_ = static_cast<std::size_t>(m1 * m2);
        inst.codewords_.resize(inst.rows_ * b->n);
        num::RngStream rng(b->seed, kCodebookStream);
        const double sb = std::sqrt(1.0 - b->alpha * b->alpha);
        std::vector<double> u(b->n), v(b->n);
        for (std::int64_t i = 0; i < m1; ++i) {
            sphere_point(rng, 1.0, u);
            for (std::int64_t j = 0; j < m2; ++j) {
                sphere_point(rng, 1.0, v);
                double* row = &inst.codewords_[(i * m2 + j) * b->n];
                for (int k = 0; k < b->n; ++k) row[k] = b->alpha * u[k] + sb * v[k];
            }
        }
        return inst;
    }

    if (const auto* t = std::get_if<TreeCodeSpec>(&spec)) {
        require(t->n >= 2 && t->lambda1 > 0 && t->lambda1 < 1 && t->r1 > 0 && t->r2 > 0,
                errc::invalid_argument, "oracle: malformed tree spec");
        const int n1 = std::clamp(static_cast<int>(std::lround(t->lambda1 * t->n)), 1, t->n - 1);
        const int n2 = t->n - n1;
        const std::int64_t m1 = code_size(t->r1, n1);
        const std::int64_t m2 = code_size(t->r2, n2);
        require(m1 * m2 <= kMaxCodebook, errc::too_large,
                "oracle: tree codebook exceeds the enumeration guard");
        inst.n_ = t->n;
        inst.rows_ = static_cast<std::size_t>(m1 * m2);
        inst.codewords_.resize(inst.rows_ * t->n);
        num::RngStream rng(t->seed, kCodebookStream);
        std::vector<double> seg1(n1), seg2(n2);
        for (std::int64_t i = 0; i < m1; ++i) {
            sphere_point(rng, 1.0, seg1);
            for (std::int64_t j = 0; j < m2; ++j) {
                sphere_point(rng, 1.0, seg2);
                double* row = &inst.codewords_[(i * m2 + j) * t->n];
                std::copy(seg1.begin(), seg1.end(), row);
                std::copy(seg2.begin(), seg2.end(), row + n1);
            }
        }
        return inst;
    }

    const auto& sp = std::get<SparseSpec>(spec);
    require(sp.n >= 1 && sp.n <= kMaxSparseBits, errc::too_large,
            "oracle: sparse support count exceeds the enumeration guard");
    require(sp.sigma2 > 0, errc::invalid_argument, "oracle: sigma2 must be > 0");
    inst.n_ = sp.n;
    SparseTables tab{sp.sigma2, sp.prior, {}, {}, 0.0};
    tab.log_nf_by_count.resize(sp.n + 1);
    std::vector<double> lse_terms(sp.n + 1);
    for (int k = 0; k <= sp.n; ++k) {
        const double m = 1.0 - 2.0 * k / sp.n;
        tab.log_nf_by_count[k] = sp.n * sp.prior.f(m);
        lse_terms[k] = log_binom(sp.n, k) + tab.log_nf_by_count[k];
    }
    const double lse = kern::logsumexp(lse_terms);
    tab.ln_cn = -lse;
    tab.log_prior_by_count.resize(sp.n + 1);
    for (int k = 0; k <= sp.n; ++k) tab.log_prior_by_count[k] = lse_terms[k] - lse;
    inst.sparse_ = std::move(tab);
    return inst;
}

// ---------------------------------------------------------------------------
// Signal prior
// ---------------------------------------------------------------------------

void Instance::draw_signal(num::RngStream& rng, std::span<double> x) const {
    if (!sparse_) {
        const std::size_t idx = static_cast<std::size_t>(rng.next_u64() % rows_);
        const double* row = &codewords_[idx * n_];
        std::copy(row, row + n_, x.begin());
        return;
    }
    // support size from its exact distribution, then a uniform k-subset
    const double u = rng.next_uniform();
    double cdf = 0.0;
    int k = 0;
    for (; k <= n_; ++k) {
        cdf += std::exp(sparse_->log_prior_by_count[k]);
        if (u <= cdf) break;
    }
    if (k > n_) k = n_;
    int idx[kMaxSparseBits];
    for (int i = 0; i < n_; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n_ - i));
        std::swap(idx[i], idx[j]);
    }
    std::fill(x.begin(), x.end(), 0.0);
    const double sd = std::sqrt(sparse_->sigma2);
    for (int i = 0; i < k; ++i) x[idx[i]] = sd * rng.next_gaussian();
}

// ---------------------------------------------------------------------------
// Exact posterior mean
// ---------------------------------------------------------------------------

PosteriorMean Instance::posterior_mean(std::span<const double> y, double beta) const {
    require(static_cast<int>(y.size()) == n_, errc::invalid_argument,
            "oracle: observation length mismatch");
    require(beta > 0 && std::isfinite(beta), errc::invalid_argument, "oracle: beta must be > 0");
    for (double yi : y)
        require(std::isfinite(yi), errc::invalid_argument, "oracle: non-finite observation");

    PosteriorMean out;
    out.xhat.assign(n_, 0.0);

    if (!sparse_) {
        thread_local std::vector<double> energies;
        energies.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            energies[i] =
                -0.5 * beta * kern::sq_dist(y, {&codewords_[i * n_], static_cast<std::size_t>(n_)});
        const double shift = kern::vmax(energies);
        const double z = kern::exp_sum(energies, shift);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double w = std::exp(energies[i] - shift) / z;
            kern::axpy(w, {&codewords_[i * n_], static_cast<std::size_t>(n_)}, out.xhat);
        }
        out.ln_z = shift + std::log(z) - std::log(static_cast<double>(rows_));
        return out;
    }

    // Per-symbol factors: s_i = 0 contributes exp(-beta y_i^2 / 2), s_i = 1
    // contributes (1+q)^{-1/2} exp(-beta y_i^2 / (2(1+q))).
    const double q = beta * sparse_->sigma2;
    const double shrink = q / (1.0 + q);
    double t0[kMaxSparseBits], t1[kMaxSparseBits];
    for (int i = 0; i < n_; ++i) {
        t0[i] = -0.5 * beta * y[i] * y[i];
        t1[i] = -0.5 * std::log1p(q) - 0.5 * beta * y[i] * y[i] / (1.0 + q);
    }

    const std::uint32_t count = std::uint32_t{1} << n_;
    double lse = -HUGE_VAL;
    thread_local std::vector<double> logw;
    logw.resize(count);
    for (std::uint32_t s = 0; s < count; ++s) {
        const int k = std::popcount(s);
        double lw = sparse_->ln_cn + sparse_->log_nf_by_count[k];
        for (int i = 0; i < n_; ++i) lw += (s >> i) & 1u ? t1[i] : t0[i];
        logw[s] = lw;
        lse = lw > lse ? lw : lse;
    }
    double z = 0.0;
    double p1[kMaxSparseBits] = {0.0};
    for (std::uint32_t s = 0; s < count; ++s) {
        const double w = std::exp(logw[s] - lse);
        z += w;
        for (int i = 0; i < n_; ++i)
            if ((s >> i) & 1u) p1[i] += w;
    }
    for (int i = 0; i < n_; ++i) out.xhat[i] = (p1[i] / z) * shrink * y[i];
    out.ln_z = lse + std::log(z);
    return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo drivers
// ---------------------------------------------------------------------------

namespace {

struct SampleStats {
    num::MeanAccumulator mmse;     // ||x - xhat||^2
    num::MeanAccumulator err2;     // ||y - x||^2
    num::MeanAccumulator delta;    // ||y - xhat||^2
    num::MeanAccumulator ln_z;
    num::CovAccumulator err2_lnz;  // Cov{||Y-X||^2, ln Z}

    void merge(const SampleStats& o) {
        mmse.merge(o.mmse);
        err2.merge(o.err2);
        delta.merge(o.delta);
        ln_z.merge(o.ln_z);
        err2_lnz.merge(o.err2_lnz);
    }
};

// Runs the fixed batch schedule and merges per-batch stats in batch order.
template <typename PerSample>
void run_batches(std::int64_t samples, std::uint64_t seed, const Instance& inst, double beta,
                 std::vector<SampleStats>& out, const PerSample& per_sample) {
    const int batches = static_cast<int>((samples + kBatchSize - 1) / kBatchSize);
    out.assign(batches, {});
    const int n = inst.n();
    num::parallel_for(batches, num::default_threads(), [&](int b) {
        num::RngStream rng(seed, static_cast<std::uint64_t>(b));
        const std::int64_t lo = b * kBatchSize;
        const std::int64_t hi = std::min<std::int64_t>(samples, lo + kBatchSize);
        std::vector<double> x(n), y(n);
        const double noise_sd = 1.0 / std::sqrt(beta);
        for (std::int64_t s = lo; s < hi; ++s) {
            inst.draw_signal(rng, x);
            for (int i = 0; i < n; ++i) y[i] = x[i] + noise_sd * rng.next_gaussian();
            per_sample(out[b], x, y);
        }
    });
}

void full_sample(SampleStats& st, const Instance& inst, double beta, const std::vector<double>& x,
                 const std::vector<double>& y) {
    const PosteriorMean pm = inst.posterior_mean(y, beta);
    st.mmse.add(kern::sq_dist(x, pm.xhat));
    const double e2 = kern::sq_dist(y, x);
    st.err2.add(e2);
    st.delta.add(kern::sq_dist(y, pm.xhat));
    st.ln_z.add(pm.ln_z);
    st.err2_lnz.add(e2, pm.ln_z);
}

}  // namespace

OracleEstimate mmse(const FiniteInstance& spec, double beta, std::int64_t samples,
                    std::uint64_t seed) {
    require(samples >= 100, errc::insufficient_data, "oracle: at least 100 samples required");
    const Instance inst = Instance::realize(spec);
    std::vector<SampleStats> batches;
    run_batches(samples, seed, inst, beta, batches,
                [&](SampleStats& st, const std::vector<double>& x, const std::vector<double>& y) {
                    const PosteriorMean pm = inst.posterior_mean(y, beta);
                    st.mmse.add(kern::sq_dist(x, pm.xhat));
                });
    SampleStats all;
    for (const SampleStats& b : batches) all.merge(b);
    return {all.mmse.mean() / inst.n(), all.mmse.std_error() / inst.n(), inst.n(),
            all.mmse.count(), seed};
}

OracleEstimate free_energy(const FiniteInstance& spec, double beta, std::int64_t samples,
                           std::uint64_t seed) {
    require(samples >= 100, errc::insufficient_data, "oracle: at least 100 samples required");
    const Instance inst = Instance::realize(spec);
    std::vector<SampleStats> batches;
    run_batches(samples, seed, inst, beta, batches,
                [&](SampleStats& st, const std::vector<double>&, const std::vector<double>& y) {
                    st.ln_z.add(inst.posterior_mean(y, beta).ln_z);
                });
    SampleStats all;
    for (const SampleStats& b : batches) all.merge(b);
    return {-all.ln_z.mean() / inst.n(), all.ln_z.std_error() / inst.n(), inst.n(),
            all.ln_z.count(), seed};
}

IdentitySuite identity_suite(const FiniteInstance& spec, double beta, std::int64_t samples,
                             std::uint64_t seed) {
    require(samples >= 100, errc::insufficient_data, "oracle: at least 100 samples required");
    const Instance inst = Instance::realize(spec);
    std::vector<SampleStats> batches;
    run_batches(samples, seed, inst, beta, batches,
                [&](SampleStats& st, const std::vector<double>& x, const std::vector<double>& y) {
                    full_sample(st, inst, beta, x, y);
                });

    SampleStats all;
    num::MeanAccumulator cov_b, mmse_dev_b, delta_dev_b;
    const double inv_n = 1.0 / inst.n();
    for (const SampleStats& b : batches) {
        all.merge(b);
        if (b.err2_lnz.count() < 2) continue;
        const double cov = b.err2_lnz.covariance() * inv_n;
        cov_b.add(cov);
        mmse_dev_b.add(b.mmse.mean() * inv_n - (1.0 / beta + cov));
        delta_dev_b.add(b.delta.mean() * inv_n + cov);
    }

    IdentitySuite r;
    r.mmse_per_n = {all.mmse.mean() * inv_n, all.mmse.std_error() * inv_n, inst.n(),
                    all.mmse.count(), seed};
    r.raw_noise_per_n = 1.0 / beta;
    r.cov_per_n = cov_b.mean();
    r.cov_se_per_n = cov_b.std_error();
    r.delta_per_n = all.delta.mean() * inv_n;
    r.delta_se_per_n = all.delta.std_error() * inv_n;
    r.mean_ln_z_per_n = all.ln_z.mean() * inv_n;
    r.i_per_n = -0.5 - r.mean_ln_z_per_n;
    r.sigma_per_n = 0.5 * beta * r.cov_per_n - r.i_per_n;
    r.mmse_identity_dev = mmse_dev_b.mean();
    r.mmse_identity_se = mmse_dev_b.std_error();
    r.delta_identity_dev = delta_dev_b.mean();
    r.delta_identity_se = delta_dev_b.std_error();
    r.mmse_identity_ok = std::abs(r.mmse_identity_dev) <= 3.0 * r.mmse_identity_se;
    r.delta_identity_ok = std::abs(r.delta_identity_dev) <= 3.0 * r.delta_identity_se;
    return r;
}

std::vector<SweepEstimate> sweep_estimates(const FiniteInstance& spec,
                                           std::span<const double> betas, std::int64_t samples,
                                           std::uint64_t seed) {
    require(samples >= 100, errc::insufficient_data, "oracle: at least 100 samples required");
    const Instance inst = Instance::realize(spec);
    const int batches = static_cast<int>((samples + kBatchSize - 1) / kBatchSize);
    const int n = inst.n();
    const std::size_t nb = betas.size();

    // slot (batch, beta); merged in batch order per beta afterwards
    struct Slot {
        num::MeanAccumulator mmse, lnz;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(batches) * nb);
    num::parallel_for(batches, num::default_threads(), [&](int b) {
        std::vector<double> x(n), y(n);
        const std::int64_t lo = b * kBatchSize;
        const std::int64_t hi = std::min<std::int64_t>(samples, lo + kBatchSize);
        for (std::size_t bi = 0; bi < nb; ++bi) {
            // reset the stream per beta: common random numbers across the sweep
            num::RngStream rng(seed, static_cast<std::uint64_t>(b));
            const double noise_sd = 1.0 / std::sqrt(betas[bi]);
            Slot& slot = slots[static_cast<std::size_t>(b) * nb + bi];
            for (std::int64_t s = lo; s < hi; ++s) {
                inst.draw_signal(rng, x);
                for (int i = 0; i < n; ++i) y[i] = x[i] + noise_sd * rng.next_gaussian();
                const PosteriorMean pm = inst.posterior_mean(y, betas[bi]);
                slot.mmse.add(kern::sq_dist(x, pm.xhat));
                slot.lnz.add(pm.ln_z);
            }
        }
    });

    std::vector<SweepEstimate> out(nb);
    for (std::size_t bi = 0; bi < nb; ++bi) {
        num::MeanAccumulator mmse, lnz;
        for (int b = 0; b < batches; ++b) {
            mmse.merge(slots[static_cast<std::size_t>(b) * nb + bi].mmse);
            lnz.merge(slots[static_cast<std::size_t>(b) * nb + bi].lnz);
        }
        out[bi].mmse = {mmse.mean() / n, mmse.std_error() / n, n, mmse.count(), seed};
        out[bi].free_energy = {-lnz.mean() / n, lnz.std_error() / n, n, lnz.count(), seed};
    }
    return out;
}

}  // namespace mmselab::oracle
