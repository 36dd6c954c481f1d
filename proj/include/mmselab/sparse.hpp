// Sparse-signal model X_i = S_i U_i with U_i ~ N(0, sigma^2) and an
// exchangeable support prior P(mu) = C_n exp{n f(m(mu))} over spins
// mu_i = 1 - 2 s_i. After the spin transform the posterior is a mean-field
// spin system in a random local field; magnetization fixed points, their
// stability, the dominant branch and the closed-form mutual information /
// MMSE all follow from one-dimensional expectations over the field law.
//
// Sign conventions: psi(m) = f'(m) m - f(m) - E ln[2 cosh(f'(m) + H)] is
// minimized by the dominant branch. The stability test is written as
// f''(m) (1 - E tanh^2) < 1, which reduces to the usual
// E tanh^2 > 1 - 1/f'' when f'' > 0 and is vacuous when f'' <= 0.

#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "mmselab/numerics.hpp"

namespace mmselab::sparse {

// ---------------------------------------------------------------------------
// Prior exponent
// ---------------------------------------------------------------------------

// f(m) on [-1,1]; quadratic f(m) = a m + b m^2 / 2 is the workhorse, a
// custom twice-differentiable f is accepted for everything except the
// closed-form MMSE.
class PriorExponent {
  public:
    static PriorExponent quadratic(double a, double b);
    static PriorExponent custom(std::function<double(double)> f, std::function<double(double)> df,
                                std::function<double(double)> d2f);

    double f(double m) const;
    double df(double m) const;
    double d2f(double m) const;

    bool is_quadratic() const { return quad_.has_value(); }
    double a() const;  // quadratic only
    double b() const;  // quadratic only

  private:
    struct Quad {
        double a, b;
    };
    std::optional<Quad> quad_;
    std::function<double(double)> f_, df_, d2f_;
};

// ---------------------------------------------------------------------------
// Field models
// ---------------------------------------------------------------------------

// Abstraction over the law of the local field H: everything the fixed-point
// machinery needs is E{g(H)}.
class FieldModel {
  public:
    virtual ~FieldModel() = default;
    virtual double expect(const std::function<double(double)>& g) const = 0;
};

// Discrete field taking value h_k with probability q_k.
class AtomicField final : public FieldModel {
  public:
    AtomicField(std::vector<double> h, std::vector<double> q);
    double expect(const std::function<double(double)>& g) const override;
    const std::vector<double>& h() const { return h_; }
    const std::vector<double>& q() const { return q_; }

  private:
    std::vector<double> h_, q_;
};

// The model's own field: H = H(Y) with Y a two-component centered Gaussian
// mixture (variance 1/beta with weight (1+m_a)/2, variance sigma^2 + 1/beta
// with weight (1-m_a)/2), evaluated by Gauss-Hermite quadrature per
// component.
class GaussianMixtureField final : public FieldModel {
  public:
    GaussianMixtureField(double sigma2, double beta, double m_a, int quad_order = 96);

    double expect(const std::function<double(double)>& g) const override;

    // E{g(Y)} rather than E{g(H(Y))}.
    double expect_y(const std::function<double(double)>& g) const;
    // Component-wise expectation/covariance under N(0, s sigma^2 + 1/beta).
    double expect_component(int s, const std::function<double(double)>& g) const;
    double cov_component(int s, const std::function<double(double)>& gx,
                         const std::function<double(double)>& gy) const;

    double field_of_y(double y) const;        // H(y)
    double field_deriv_of_y(double y) const;  // H'(y), the beta-derivative form
    double weight(int s) const;               // (1+m_a)/2 for s=0, (1-m_a)/2 for s=1
    double component_sd(int s) const;

  private:
    double sigma2_, beta_, m_a_, q_;
    num::Quadrature quad_;
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct SparseParams {
    double sigma2 = 1.0;
    PriorExponent prior = PriorExponent::quadratic(1.0, 0.0);
    int quad_order = 96;

    double q(double beta) const { return beta * sigma2; }
};

void validate(const SparseParams& p);

// ---------------------------------------------------------------------------
// Prior magnetization
// ---------------------------------------------------------------------------

struct MagnetizationPrior {
    double m_a;            // maximizer of H2((1+m)/2) + f(m) on [-1,1]
    double log_cn_per_n;   // -[H2((1+m_a)/2) + f(m_a)]
    bool tie;              // symmetric prior with two global maximizers
};

double binary_entropy(double p);  // natural log

MagnetizationPrior prior_magnetization(const PriorExponent& prior);

// ---------------------------------------------------------------------------
// Fixed points
// ---------------------------------------------------------------------------

enum class Stability { stable, unstable, critical };

struct FixedPointBranch {
    double m;            // root of m = E tanh(f'(m) + H)
    Stability stability;
    double psi_value;    // psi(m) per the minimization convention
    double stability_margin;  // 1 - f''(m)(1 - E tanh^2); > 0 means stable
};

// All fixed points on [-1+eps, 1-eps], sorted by psi_value ascending.
std::vector<FixedPointBranch> fixed_points(const PriorExponent& prior, const FieldModel& field,
                                           int scan_grid = 2048);

struct Dominant {
    FixedPointBranch branch;
    bool coexistence;  // psi tie within 1e-10 across distinct branches
};

Dominant dominant(const std::vector<FixedPointBranch>& branches);

// Convenience: the model's own field at (p, beta).
std::vector<FixedPointBranch> fixed_points(const SparseParams& p, double beta);
Dominant dominant(const SparseParams& p, double beta);

// Discrete-field system: solves m = sum_k q_k tanh(f'(m) + h_k) and returns
// the per-group magnetizations m_k alongside each branch.
struct DiscreteBranch {
    FixedPointBranch branch;
    std::vector<double> m_k;
};
std::vector<DiscreteBranch> fixed_points_discrete(const std::vector<double>& h,
                                                  const std::vector<double>& q,
                                                  const PriorExponent& prior);

// Small-|a|, b slightly above 1 spontaneous-magnetization approximation
// m0 = (1/b) sqrt(3 (1 - 1/b)); requires b > 1.
double curie_weiss_approx(double b);

// ---------------------------------------------------------------------------
// Information quantities
// ---------------------------------------------------------------------------

// Asymptotic I/n via the general expression (works for any prior).
double mutual_info_per_n(const SparseParams& p, double beta);

// Expanded quadratic-prior expression; equals mutual_info_per_n to ~1e-10.
double mutual_info_quadratic(const SparseParams& p, double beta);

struct HsFreeEnergy {
    double value;      // Laplace value with the population field average
    double empirical;  // same with an empirical field average (NaN if no samples)
    int samples;
};

// lim (1/n) ln sum_mu P(mu) e^{sum mu_i h_i} via the Gaussian-integral
// linearization of the quadratic term: Laplace evaluation of the 1-D
// integral. Equals lim (1/n) ln C_n - min_m psi(m).
HsFreeEnergy free_energy_hs(const SparseParams& p, double beta, int field_samples,
                            num::RngStream rng);

// Closed-form asymptotic MMSE (quadratic prior): the explicit-derivative A
// term plus the covariance and field-derivative terms per mixture component.
double mmse_per_n(const SparseParams& p, double beta);

struct ExtremeCases {
    double wiener;    // sigma^2 / (1 + q)
    double all_zero;  // (1 - m_a)/2 * sigma^2
};
ExtremeCases extreme_cases(const SparseParams& p, double beta);

// ---------------------------------------------------------------------------
// Critical points
// ---------------------------------------------------------------------------

enum class Axis { beta, a, b, sigma2 };
std::string_view axis_name(Axis a);

enum class TransitionOrder { first, second };

struct PhaseTransition {
    double location;          // value of the scanned parameter
    TransitionOrder order;
    double left_m, right_m;   // dominant m* limits
    double left_mmse, right_mmse;  // NaN when the MMSE is not evaluable
};

struct CriticalScan {
    Axis axis;
    double lo, hi;
    int grid = 256;
    bool zero_field = false;  // replace H by an atom at 0 (Curie-Weiss hook)
    double beta = 1.0;        // fixed beta when scanning another axis
};

// Walks the axis, tracking the dominant branch: reports (i) stability-margin
// zero crossings on the dominant branch (second order) and (ii) dominant-m*
// jumps (first order), both refined by bisection. Left/right m* and MMSE
// limits are reported; the MMSE at a coexistence point is not averaged.
std::vector<PhaseTransition> critical_scan(const SparseParams& p, const CriticalScan& scan);

}  // namespace mmselab::sparse
