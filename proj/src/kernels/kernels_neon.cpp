// NEON kernel variants for AArch64.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>
#include <limits>

namespace mmselab::kern::detail {

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sq_dist_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

double vmax_neon(const double* v, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 2) {
        float64x2_t vm = vld1q_f64(v);
        for (i = 2; i + 2 <= n; i += 2) vm = vmaxq_f64(vm, vld1q_f64(v + i));
        m = vmaxvq_f64(vm);
    }
    for (; i < n; ++i) m = v[i] > m ? v[i] : m;
    return m;
}

double exp_sum_neon(const double* v, double shift, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    double tmp[2];
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(tmp, vsubq_f64(vld1q_f64(v + i), vdupq_n_f64(shift)));
        tmp[0] = std::exp(tmp[0]);
        tmp[1] = std::exp(tmp[1]);
        acc = vaddq_f64(acc, vld1q_f64(tmp));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += std::exp(v[i] - shift);
    return s;
}

}  // namespace mmselab::kern::detail

#endif  // __aarch64__
