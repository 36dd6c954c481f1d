// Shared numerical kernels: probabilist Gauss-Hermite quadrature, bounded
// 1-D maximization (coarse grid + golden section), root bracketing with
// bisection, adaptive Simpson integration, seeded Gaussian sampling and
// mergeable moment accumulators.
//
// All routines are pure functions of their inputs and safe for concurrent
// use. A single RngStream must not be sampled from two threads at once.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mmselab::num {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Probabilist convention: nodes/weights integrate against the N(0,1) density,
// i.e. E{g(X)} ~= sum_i w_i g(x_i), exact for polynomials of degree
// <= 2*order - 1. Nodes are strictly increasing and the weights sum to 1.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    double expect(const std::function<double(double)>& g) const;
    // E{g(mu + sigma * X)} for X ~ N(0,1), i.e. g under N(mu, sigma^2).
    double expect_scaled(double mu, double sigma, const std::function<double(double)>& g) const;
};

Quadrature gauss_hermite(int order);

// ---------------------------------------------------------------------------
// Maximization / root finding
// ---------------------------------------------------------------------------

struct MaxResult {
    double argmax;
    double max;
};

// Global maximization on [lo, hi]: coarse scan (>= grid_points samples)
// followed by golden-section refinement of the best bracket. Ties on the
// grid break toward the smaller argument. The result is never below the
// best grid sample.
MaxResult maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                      double tol = 1e-10, int grid_points = 512);

struct Bracket {
    double lo, hi;
    double f_lo, f_hi;
};

// All sign changes of f on a scan grid, bisected until the bracket is
// narrower than tol; roots returned sorted ascending. Brackets closer than
// one coarse cell are separated by a 10x local rescan.
std::vector<double> find_roots_1d(const std::function<double(double)>& f, double lo, double hi,
                                  int grid = 256, double tol = 1e-10);

// Bisection on a valid sign-change bracket.
double bisect(const std::function<double(double)>& f, Bracket b, double tol = 1e-12);

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

// Counter-derived xoshiro256++ stream. Identical (seed, stream_id) pairs
// reproduce identical draws bit for bit; distinct stream_ids give
// statistically independent streams, which is what the batch scheduler
// relies on for thread-count-independent results.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();
    double next_uniform();  // (0, 1]
    double next_gaussian(); // N(0, 1), Box-Muller

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

  private:
    std::uint64_t s_[4];
    std::uint64_t seed_, stream_id_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// ---------------------------------------------------------------------------
// Streaming moments
// ---------------------------------------------------------------------------

// Welford mean/variance accumulator with associative merge.
class MeanAccumulator {
  public:
    void add(double x);
    void merge(const MeanAccumulator& other);
    std::int64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const;   // unbiased
    double std_error() const;  // sqrt(variance / n)

  private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Paired accumulator for Cov{X, Y} with associative merge (unbiased, n-1).
class CovAccumulator {
  public:
    void add(double x, double y);
    void merge(const CovAccumulator& other);
    std::int64_t count() const noexcept { return n_; }
    double mean_x() const noexcept { return mx_; }
    double mean_y() const noexcept { return my_; }
    double covariance() const;

  private:
    std::int64_t n_ = 0;
    double mx_ = 0.0, my_ = 0.0;
    double cxy_ = 0.0;
};

// ---------------------------------------------------------------------------
// Deterministic parallel batching
// ---------------------------------------------------------------------------

// Runs fn(batch_index) for batch_index in [0, batches) on up to `threads`
// worker threads. Work is claimed atomically but results must be written to
// per-batch slots by the callee; the decomposition is fixed, so outcomes do
// not depend on the thread count.
void parallel_for(int batches, int threads, const std::function<void(int)>& fn);

// Global default worker count (1 = serial). The CLI sets this from --threads.
int default_threads();
void set_default_threads(int n);

}  // namespace mmselab::num
