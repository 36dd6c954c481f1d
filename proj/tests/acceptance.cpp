// Acceptance suite: every criterion below prints one [PASS]/[FAIL] line
// with its wall time; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mmselab/broadcast.hpp"
#include "mmselab/iid.hpp"
#include "mmselab/numerics.hpp"
#include "mmselab/oracle.hpp"
#include "mmselab/sparse.hpp"
#include "mmselab/sphere.hpp"
#include "mmselab/sweep.hpp"
#include "mmselab/tree.hpp"

using namespace mmselab;

namespace {

int g_failures = 0;

void criterion(const char* name, double budget_seconds, const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%s] %-58s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.empty() ? "" : " - ", detail.c_str());
    if (!ok) ++g_failures;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

}  // namespace

int main() {
    num::set_default_threads(2);

    // 1. reference broadcast parameter set: transition SNRs and the
    //    numerically assembled free energy against the piecewise formula
    criterion("1: broadcast transitions + assembled free energy", 10.0, [](std::string& d) {
        const bc::BroadcastParams p{0.1, 0.6206, 0.7129};
        const bc::TransitionBetas t = bc::transition_betas(p);
        bool ok = near(t.beta1, 0.5545, 1e-3) && near(t.beta2, 5.001, 1e-2);
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double beta = 0.1 * std::pow(100.0, i / 400.0);
            const double assembled = bc::free_energy_per_n(p, beta).psi_per_n - 0.5;
            const double piecewise = bc::mutual_info_per_n(p, beta).value;
            worst = std::max(worst, std::abs(assembled - piecewise));
        }
        ok = ok && worst < 1e-4;
        d = fmt("beta1=%.4f beta2=%.3f worst=%.1e", t.beta1, t.beta2, worst);
        return ok;
    });

    // 2. i.i.d. closed-form suite at 20 log-spaced betas
    criterion("2: iid closed-form relations exact to 1e-6", 1.0, [](std::string& d) {
        const iid::IidParams p{1.0};
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double beta = 0.05 * std::pow(400.0, i / 19.0);
            const iid::DeltaFisher df = iid::delta_and_fisher(p, beta);
            const double denom = 1.0 + beta * p.px;
            worst = std::max(worst, std::abs(iid::free_energy_per_n(p, beta) -
                                             (0.5 * std::log(denom) + 0.5)));
            worst = std::max(worst, std::abs(iid::mmse_per_n(p, beta) - p.px / denom));
            worst = std::max(worst, std::abs(df.delta_per_n - 1.0 / (beta * denom)));
            worst = std::max(worst, std::abs(df.fisher_per_n - beta / denom));
            worst = std::max(worst, std::abs(df.fisher_per_n - beta * beta * df.delta_per_n));
            const double h = 1e-5 * beta;
            const double fd = (iid::free_energy_per_n(p, beta + h) -
                               iid::free_energy_per_n(p, beta - h)) /
                              (2.0 * h);
            worst = std::max(worst, std::abs(2.0 * fd - iid::mmse_per_n(p, beta)));
        }
        d = fmt("worst=%.1e", worst);
        return worst < 1e-6;
    });

    // 3. sphere-code first-order transition
    criterion("3: sphere transition at beta_R = e - 1", 5.0, [](std::string& d) {
        const sphere::SphereParams p{1.0, 0.5};
        const sweep::ModelParams model = p;
        const auto curve = sweep::run_sweep(model, {0.5, 4.0, 300, false});
        const sweep::TransitionReport rep = sweep::detect_transitions(model, curve);
        if (rep.transitions.size() != 1) {
            d = "expected exactly one transition";
            return false;
        }
        const sweep::PhaseTransition& t = rep.transitions.front();
        bool ok = t.order == sweep::TransitionOrder::first;
        ok = ok && near(t.beta_c, std::exp(1.0) - 1.0, 1e-4);
        ok = ok && near(t.left_mmse, std::exp(-1.0), 1e-6);
        const double br = sphere::beta_r(p);
        for (double beta = br * (1 + 1e-12); beta < 50; beta *= 1.3)
            ok = ok && sphere::mmse_per_n(p, beta) == 0.0;
        d = fmt("beta_c=%.6f left=%.6f", t.beta_c, t.left_mmse);
        return ok;
    });

    // 4. tree-code dichotomy
    criterion("4: tree transitions + flat-case sphere equivalence", 5.0, [](std::string& d) {
        const tree::TreeParams split{0.5, 0.2, 0.8};
        const sweep::ModelParams model = split;
        const auto curve = sweep::run_sweep(model, {0.1, 8.0, 400, false});
        const sweep::TransitionReport rep = sweep::detect_transitions(model, curve);
        if (rep.transitions.size() != 2) {
            d = "expected two transitions";
            return false;
        }
        bool ok = near(rep.transitions[0].beta_c, std::expm1(0.4), 1e-4) &&
                  near(rep.transitions[1].beta_c, std::expm1(1.6), 1e-4);
        const tree::TreeParams flat{0.5, 0.8, 0.2};
        const sphere::SphereParams eq{1.0, flat.rate()};
        double worst = 0.0;
        for (double beta = 0.05; beta < 20.0; beta *= 1.03) {
            worst = std::max(worst, std::abs(tree::free_energy_per_n(flat, beta).psi_per_n -
                                             sphere::free_energy_per_n(eq, beta).psi_per_n));
            worst = std::max(worst,
                             std::abs(tree::mmse_per_n(flat, beta) - sphere::mmse_per_n(eq, beta)));
        }
        ok = ok && worst < 1e-10;
        d = fmt("b1=%.5f b2=%.5f flat-diff=%.1e", rep.transitions[0].beta_c,
                rep.transitions[1].beta_c, worst);
        return ok;
    });

    // 5. sparse-model self-consistency
    criterion("5a: sparse fixed-point residuals < 1e-10", 30.0, [](std::string& d) {
        double worst = 0.0;
        for (double a : {-0.5, 0.0, 0.5}) {
            for (double b : {0.0, 0.8, 1.5}) {
                sparse::SparseParams p;
                p.prior = sparse::PriorExponent::quadratic(a, b);
                const sparse::MagnetizationPrior mp = sparse::prior_magnetization(p.prior);
                const sparse::GaussianMixtureField f(p.sigma2, 1.3, mp.m_a, p.quad_order);
                for (const auto& br : sparse::fixed_points(p.prior, f)) {
                    const double resid =
                        br.m - f.expect([&](double h) { return std::tanh(p.prior.df(br.m) + h); });
                    worst = std::max(worst, std::abs(resid));
                }
            }
        }
        d = fmt("worst=%.1e", worst);
        return worst < 1e-10;
    });

    criterion("5b: general vs quadratic mutual information to 1e-10", 30.0, [](std::string& d) {
        sparse::SparseParams p;
        p.prior = sparse::PriorExponent::quadratic(0.5, 1.2);
        double worst = 0.0;
        for (double beta : {0.3, 0.7, 1.0, 2.0, 5.0})
            worst = std::max(worst, std::abs(sparse::mutual_info_per_n(p, beta) -
                                             sparse::mutual_info_quadratic(p, beta)));
        d = fmt("worst=%.1e", worst);
        return worst < 1e-10;
    });

    criterion("5c: closed-form mmse vs 2 dI/dbeta at 10 smooth points", 30.0, [](std::string& d) {
        sparse::SparseParams p;
        p.prior = sparse::PriorExponent::quadratic(0.5, 1.2);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double beta = 0.4 * std::pow(8.0, i / 9.0);
            const double h = std::max(1e-4, 1e-3 * beta);
            const double fd = (sparse::mutual_info_per_n(p, beta + h) -
                               sparse::mutual_info_per_n(p, beta - h)) /
                              (2.0 * h);
            worst = std::max(worst, std::abs(2.0 * fd - sparse::mmse_per_n(p, beta)));
        }
        d = fmt("worst=%.1e", worst);
        return worst < 1e-5;
    });

    criterion("5d: Hubbard-Stratonovich route vs fixed-point route", 30.0, [](std::string& d) {
        sparse::SparseParams p;
        p.prior = sparse::PriorExponent::quadratic(0.5, 1.2);
        double worst = 0.0;
        for (double beta : {0.5, 1.0, 2.0}) {
            const sparse::HsFreeEnergy hs =
                sparse::free_energy_hs(p, beta, 0, num::RngStream(1, 0));
            const sparse::MagnetizationPrior mp = sparse::prior_magnetization(p.prior);
            const sparse::Dominant dom = sparse::dominant(p, beta);
            worst = std::max(worst,
                             std::abs(hs.value - (mp.log_cn_per_n - dom.branch.psi_value)));
        }
        d = fmt("worst=%.1e", worst);
        return worst < 1e-6;
    });

    criterion("5e: Curie-Weiss criticality detected at b = 1", 30.0, [](std::string& d) {
        sparse::SparseParams p;
        p.prior = sparse::PriorExponent::quadratic(0.0, 1.0);
        sparse::CriticalScan scan;
        scan.axis = sparse::Axis::b;
        scan.lo = 0.5;
        scan.hi = 1.5;
        scan.grid = 64;
        scan.zero_field = true;
        const auto found = sparse::critical_scan(p, scan);
        if (found.empty()) {
            d = "no critical point found";
            return false;
        }
        d = fmt("b_c=%.8f", found.front().location);
        return near(found.front().location, 1.0, 1e-6);
    });

    criterion("5f: dense-limit Wiener mmse within 1% at b=8, a=-8", 30.0, [](std::string& d) {
        sparse::SparseParams p;
        p.prior = sparse::PriorExponent::quadratic(-8.0, 8.0);
        const double got = sparse::mmse_per_n(p, 1.0);
        const double want = p.sigma2 / (1.0 + p.q(1.0));
        d = fmt("mmse=%.6f wiener=%.6f", got, want);
        return std::abs(got - want) / want < 0.01;
    });

    // 6. oracle equivalences
    criterion("6a: sparse b=0 n=8 oracle vs asymptotic within 3 s.e.", 300.0,
              [](std::string& d) {
                  sparse::SparseParams p;
                  p.prior = sparse::PriorExponent::quadratic(1.0, 0.0);
                  const oracle::FiniteInstance inst =
                      oracle::SparseSpec{8, 1.0, p.prior};
                  const oracle::OracleEstimate est = oracle::mmse(inst, 1.0, 100000, 424242);
                  const double asym = sparse::mmse_per_n(p, 1.0);
                  const double dev = std::abs(est.value - asym);
                  d = fmt("asym=%.6f oracle=%.6f (se=%.1e)", asym, est.value, est.std_err);
                  return dev <= 3.0 * est.std_err;
              });

    criterion("6b: covariance and delta identities within 3 s.e.", 300.0, [](std::string& d) {
        const oracle::IdentitySuite sp = oracle::identity_suite(
            oracle::SparseSpec{6, 1.0, sparse::PriorExponent::quadratic(0.5, 1.2)}, 1.0, 40000,
            99);
        const oracle::IdentitySuite sph = oracle::identity_suite(
            oracle::SphereCodeSpec{10, 0.4, 1.0, 1234}, 1.5, 40000, 77);
        d = fmt("sparse dev=%.1e sphere dev=%.1e", std::abs(sp.mmse_identity_dev),
                std::abs(sph.mmse_identity_dev));
        return sp.mmse_identity_ok && sp.delta_identity_ok && sph.mmse_identity_ok &&
               sph.delta_identity_ok;
    });

    criterion("6c: sphere mmse at 2 beta_R decreases in n, < 0.05 at n=16", 300.0,
              [](std::string& d) {
                  const double rate = 0.4;
                  const double beta = 2.0 * std::expm1(2.0 * rate);
                  double prev = 1e300;
                  bool ok = true;
                  std::string vals;
                  for (int n : {8, 12, 16}) {
                      const oracle::OracleEstimate est = oracle::mmse(
                          oracle::SphereCodeSpec{n, rate, 1.0, 2026}, beta, 8000, 31337);
                      ok = ok && est.value < prev;
                      prev = est.value;
                      vals += fmt("n%.0f:%.4f ", static_cast<double>(n), est.value);
                  }
                  ok = ok && prev < 0.05;
                  d = vals;
                  return ok;
              });

    // 7. determinism of the CLI binary across runs and thread counts
    criterion("7: CLI byte-determinism across runs and thread counts", 60.0,
              [](std::string& d) {
                  const auto out = [](const char* path, const char* threads) {
                      std::ostringstream cmd;
                      cmd << MMSELAB_BIN
                          << " oracle --model sparse --n 6 --a 0.5 --b 1.2 --samples 3000"
                             " --points 5 --seed 2718 --threads "
                          << threads << " --out " << path;
                      return std::system(cmd.str().c_str());
                  };
                  if (out("/tmp/mmselab_acc_a.csv", "1") != 0) return false;
                  if (out("/tmp/mmselab_acc_b.csv", "1") != 0) return false;
                  if (out("/tmp/mmselab_acc_c.csv", "4") != 0) return false;
                  const auto slurp = [](const char* p) {
                      std::ifstream in(p, std::ios::binary);
                      std::ostringstream ss;
                      ss << in.rdbuf();
                      return ss.str();
                  };
                  const std::string a = slurp("/tmp/mmselab_acc_a.csv");
                  d = fmt("bytes=%.0f", static_cast<double>(a.size()));
                  return !a.empty() && a == slurp("/tmp/mmselab_acc_b.csv") &&
                         a == slurp("/tmp/mmselab_acc_c.csv");
              });

    if (g_failures) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
