#include "mmselab/relations.hpp"

#include <cmath>

#include "mmselab/errors.hpp"
#include "mmselab/kernels.hpp"

namespace mmselab::relations {

namespace {

void check_curve(const FreeEnergyCurve& c) {
    require(c.betas.size() == c.psi_per_n.size() && c.betas.size() >= 3, errc::invalid_argument,
            "free-energy curve: need matching beta/psi arrays with >= 3 points");
    for (std::size_t i = 0; i < c.betas.size(); ++i) {
        require(c.betas[i] > 0 && std::isfinite(c.psi_per_n[i]), errc::invalid_argument,
                "free-energy curve: betas must be positive, psi finite");
        if (i) require(c.betas[i] > c.betas[i - 1], errc::invalid_argument,
                       "free-energy curve: betas must be strictly increasing");
    }
}

}  // namespace

double mmse_from_free_energy(const FreeEnergyCurve& curve, std::size_t index) {
    check_curve(curve);
    require(index > 0 && index + 1 < curve.betas.size(), errc::out_of_range,
            "mmse_from_free_energy: index must be interior");
    const double dpsi = curve.psi_per_n[index + 1] - curve.psi_per_n[index - 1];
    const double dbeta = curve.betas[index + 1] - curve.betas[index - 1];
    return 2.0 * dpsi / dbeta;
}

OneSided mmse_one_sided(const FreeEnergyCurve& curve, std::size_t index) {
    check_curve(curve);
    require(index > 0 && index + 1 < curve.betas.size(), errc::out_of_range,
            "mmse_one_sided: index must be interior");
    const double left = 2.0 * (curve.psi_per_n[index] - curve.psi_per_n[index - 1]) /
                        (curve.betas[index] - curve.betas[index - 1]);
    const double right = 2.0 * (curve.psi_per_n[index + 1] - curve.psi_per_n[index]) /
                         (curve.betas[index + 1] - curve.betas[index]);
    return {left, right};
}

RelationReport covariance_identity_check(std::span<const PairedSample> samples, double beta,
                                         int n, double direct_mmse_per_n,
                                         double direct_mmse_se_per_n) {
    require(samples.size() >= 1000, errc::insufficient_data,
            "covariance_identity_check: >= 1000 paired samples required");
    require(beta > 0 && n >= 1, errc::invalid_argument,
            "covariance_identity_check: beta > 0 and n >= 1 required");

    num::CovAccumulator cov;
    num::MeanAccumulator lnz;
    for (const PairedSample& s : samples) {
        cov.add(s.err_sq, s.ln_z);
        lnz.add(s.ln_z);
    }
    // covariance standard error via fixed-size block means
    const std::size_t block = 100;
    num::MeanAccumulator cov_blocks;
    for (std::size_t lo = 0; lo + block <= samples.size(); lo += block) {
        num::CovAccumulator c;
        for (std::size_t i = lo; i < lo + block; ++i) c.add(samples[i].err_sq, samples[i].ln_z);
        cov_blocks.add(c.covariance());
    }

    RelationReport r;
    r.mmse_per_n = direct_mmse_per_n;
    r.mmse_se_per_n = direct_mmse_se_per_n;
    r.raw_noise_per_n = 1.0 / beta;
    r.covariance_term_per_n = cov.covariance() / n;
    r.covariance_se_per_n = cov_blocks.std_error() / n;
    r.identity_value_per_n = r.raw_noise_per_n + r.covariance_term_per_n;
    r.delta_per_n = -r.covariance_term_per_n;
    r.delta_se_per_n = r.covariance_se_per_n;
    const double i_per_n = -0.5 - lnz.mean() / n;
    r.sigma_beta_per_n = 0.5 * beta * r.covariance_term_per_n - i_per_n;
    r.fisher_trace_per_n = beta * beta * r.delta_per_n;
    const double se = std::hypot(r.mmse_se_per_n, r.covariance_se_per_n);
    r.identity_ok = std::abs(r.mmse_per_n - r.identity_value_per_n) <= 3.0 * se;
    return r;
}

RelationReport fisher_delta_identity(const iid::IidParams& p, double beta) {
    const iid::DeltaFisher df = iid::delta_and_fisher(p, beta);
    RelationReport r;
    r.mmse_per_n = iid::mmse_per_n(p, beta);
    r.raw_noise_per_n = 1.0 / beta;
    r.covariance_term_per_n = -df.delta_per_n;
    r.identity_value_per_n = r.raw_noise_per_n + r.covariance_term_per_n;
    r.delta_per_n = df.delta_per_n;
    r.fisher_trace_per_n = df.fisher_per_n;
    r.sigma_beta_per_n = iid::sigma_per_n(p, beta);
    r.identity_ok = std::abs(r.mmse_per_n - r.identity_value_per_n) <= 1e-12;
    r.fisher_identity_ok =
        std::abs(r.fisher_trace_per_n - beta * beta * r.delta_per_n) <= 1e-12;
    return r;
}

RelationReport fisher_delta_identity(const oracle::FiniteInstance& inst, double beta,
                                     std::int64_t samples, std::uint64_t seed) {
    require(samples >= 100, errc::insufficient_data,
            "fisher_delta_identity: at least 100 samples required");
    const oracle::Instance realized = oracle::Instance::realize(inst);
    const int n = realized.n();
    const double h = 1e-5 / std::sqrt(beta);  // score step, scaled to the noise

    num::MeanAccumulator delta_acc, fisher_acc, dev_acc;
    num::RngStream rng(seed, 0);
    std::vector<double> x(n), y(n), yp(n), ym(n);
    const double noise_sd = 1.0 / std::sqrt(beta);
    for (std::int64_t s = 0; s < samples; ++s) {
        realized.draw_signal(rng, x);
        for (int i = 0; i < n; ++i) y[i] = x[i] + noise_sd * rng.next_gaussian();
        const oracle::PosteriorMean pm = realized.posterior_mean(y, beta);
        const double delta = kern::sq_dist(y, pm.xhat);

        double score_sq = 0.0;
        yp = y;
        ym = y;
        for (int i = 0; i < n; ++i) {
            yp[i] = y[i] + h;
            ym[i] = y[i] - h;
            const double score = (realized.posterior_mean(yp, beta).ln_z -
                                  realized.posterior_mean(ym, beta).ln_z) /
                                 (2.0 * h);
            score_sq += score * score;
            yp[i] = y[i];
            ym[i] = y[i];
        }
        delta_acc.add(delta / n);
        fisher_acc.add(score_sq / n);
        dev_acc.add(delta / n - score_sq / (n * beta * beta));
    }

    RelationReport r;
    r.raw_noise_per_n = 1.0 / beta;
    r.delta_per_n = delta_acc.mean();
    r.delta_se_per_n = delta_acc.std_error();
    r.fisher_trace_per_n = fisher_acc.mean();
    r.covariance_term_per_n = -r.delta_per_n;
    r.identity_value_per_n = r.raw_noise_per_n + r.covariance_term_per_n;
    r.mmse_per_n = r.identity_value_per_n;
    r.fisher_identity_ok = std::abs(dev_acc.mean()) <= 3.0 * dev_acc.std_error() + 1e-7;
    return r;
}

double sigma_heat_integral(const std::function<double(double)>& entropy_like, double e0_per_n,
                           double beta, double beta_max) {
    require(beta > 0 && beta_max > beta, errc::invalid_argument,
            "sigma_heat_integral: need 0 < beta < beta_max");

    // log substitution t = e^u: int_beta^B S(t)/t^2 dt = int S(e^u) e^{-u} du
    const double body = num::integrate_adaptive(
        [&](double u) {
            const double t = std::exp(u);
            return entropy_like(t) / t;
        },
        std::log(beta), std::log(beta_max), 1e-12);

    // tail fit S(t) ~ c ln t + d + e/t at the upper end
    const double t1 = 0.25 * beta_max, t2 = 0.5 * beta_max, t3 = beta_max;
    const double s1 = entropy_like(t1), s2 = entropy_like(t2), s3 = entropy_like(t3);
    require(std::isfinite(s1) && std::isfinite(s2) && std::isfinite(s3), errc::numeric_failure,
            "sigma_heat_integral: non-finite entropy at the tail fit points");
    // solve the 3x3 system for (c, d, e)
    const double l1 = std::log(t1), l2 = std::log(t2), l3 = std::log(t3);
    const double i1 = 1.0 / t1, i2 = 1.0 / t2, i3 = 1.0 / t3;
    const double det = l1 * (i3 - i2) - l2 * (i3 - i1) + l3 * (i2 - i1);
    double tail = 0.0;
    if (std::abs(det) > 1e-14) {
        const double c = (s1 * (i3 - i2) - s2 * (i3 - i1) + s3 * (i2 - i1)) / det;
        const double d = (l1 * (s2 * i3 - s3 * i2) - l2 * (s1 * i3 - s3 * i1) +
                          l3 * (s1 * i2 - s2 * i1)) /
                         det;
        const double e = (l1 * (s3 - s2) - l2 * (s3 - s1) + l3 * (s2 - s1)) / det;
        // int_B^inf (c ln t + d + e/t) / t^2 dt
        tail = c * (std::log(beta_max) + 1.0) / beta_max + d / beta_max +
               0.5 * e / (beta_max * beta_max);
    }

    return beta * e0_per_n - beta * (body + tail);
}

}  // namespace mmselab::relations
