// Backend selection and the public kernel entry points.

#include "mmselab/kernels.hpp"

#include <cmath>

namespace mmselab::kern {

namespace detail {
#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double*, const double*, std::size_t);
double sq_dist_avx2(const double*, const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
double vmax_avx2(const double*, std::size_t);
double exp_sum_avx2(const double*, double, std::size_t);
#endif
#if defined(__aarch64__)
double dot_neon(const double*, const double*, std::size_t);
double sq_dist_neon(const double*, const double*, std::size_t);
void axpy_neon(double, const double*, double*, std::size_t);
double vmax_neon(const double*, std::size_t);
double exp_sum_neon(const double*, double, std::size_t);
#endif
}  // namespace detail

namespace {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sq_dist)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*vmax)(const double*, std::size_t);
    double (*exp_sum)(const double*, double, std::size_t);
};

constexpr KernelTable kScalar = {detail::dot_scalar, detail::sq_dist_scalar, detail::axpy_scalar,
                                 detail::vmax_scalar, detail::exp_sum_scalar};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2 = {detail::dot_avx2, detail::sq_dist_avx2, detail::axpy_avx2,
                               detail::vmax_avx2, detail::exp_sum_avx2};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon = {detail::dot_neon, detail::sq_dist_neon, detail::axpy_neon,
                               detail::vmax_neon, detail::exp_sum_neon};
#endif

Backend g_backend = best_backend();
const KernelTable* g_table = nullptr;

const KernelTable* table_for(Backend b) {
    switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return &kAvx2;
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return &kNeon;
#endif
        default:
            return &kScalar;
    }
}

const KernelTable& table() {
    if (!g_table) g_table = table_for(g_backend);
    return *g_table;
}

}  // namespace

Backend best_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
    return Backend::scalar;
#elif defined(__aarch64__)
    return Backend::neon;
#else
    return Backend::scalar;
#endif
}

Backend active_backend() {
    table();
    return g_backend;
}

Backend set_backend(Backend b) {
    const Backend supported = best_backend();
    if (b != Backend::scalar && b != supported) b = Backend::scalar;
    g_backend = b;
    g_table = table_for(b);
    return g_backend;
}

double dot(std::span<const double> x, std::span<const double> y) {
    return table().dot(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

double sq_dist(std::span<const double> x, std::span<const double> y) {
    return table().sq_dist(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    table().axpy(a, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

double vmax(std::span<const double> v) { return table().vmax(v.data(), v.size()); }

double exp_sum(std::span<const double> v, double shift) {
    return table().exp_sum(v.data(), shift, v.size());
}

double logsumexp(std::span<const double> v) {
    if (v.empty()) return -HUGE_VAL;
    const double m = vmax(v);
    if (!std::isfinite(m)) return m;
    return m + std::log(exp_sum(v, m));
}

}  // namespace mmselab::kern
