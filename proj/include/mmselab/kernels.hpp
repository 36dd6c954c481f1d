// Data-parallel kernels used by the Monte Carlo oracle inner loops.
//
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2/FMA (or AArch64 with NEON), a vectorized variant. The active backend
// is picked once at startup from CPU capabilities; tests force the scalar
// backend to check equivalence. Selection is stable for the lifetime of the
// process, so outputs are reproducible run to run on the same machine.

#pragma once

#include <cstddef>
#include <span>

namespace mmselab::kern {

enum class Backend { scalar, avx2, neon };

// Backend active for subsequent kernel calls.
Backend active_backend();

// Force a backend (tests / benchmarking). Requesting an unsupported backend
// falls back to scalar and returns the backend actually installed.
Backend set_backend(Backend b);

// Highest backend this CPU supports.
Backend best_backend();

// sum_i x[i] * y[i]
double dot(std::span<const double> x, std::span<const double> y);

// sum_i (x[i] - y[i])^2
double sq_dist(std::span<const double> x, std::span<const double> y);

// y[i] += a * x[i]
void axpy(double a, std::span<const double> x, std::span<double> y);

// max_i v[i]; -inf for empty input
double vmax(std::span<const double> v);

// sum_i exp(v[i] - shift)
double exp_sum(std::span<const double> v, double shift);

// log sum_i exp(v[i]) computed as shift + log(exp_sum(v, shift)), shift = vmax
double logsumexp(std::span<const double> v);

namespace detail {
// Reference implementations, always available regardless of the active
// backend (equivalence tests compare against these).
double dot_scalar(const double* x, const double* y, std::size_t n);
double sq_dist_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
double vmax_scalar(const double* v, std::size_t n);
double exp_sum_scalar(const double* v, double shift, std::size_t n);
}  // namespace detail

}  // namespace mmselab::kern
