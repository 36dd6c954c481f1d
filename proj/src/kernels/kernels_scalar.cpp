// Scalar reference kernels. These define the semantics the vector variants
// must reproduce (up to floating-point reassociation).

#include <cmath>
#include <limits>

#include "mmselab/kernels.hpp"

namespace mmselab::kern::detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sq_dist_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double vmax_scalar(const double* v, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = v[i] > m ? v[i] : m;
    return m;
}

double exp_sum_scalar(const double* v, double shift, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::exp(v[i] - shift);
    return acc;
}

}  // namespace mmselab::kern::detail
