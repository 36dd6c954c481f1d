#include "mmselab/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mmselab/errors.hpp"

namespace mmselab::num {

// ---------------------------------------------------------------------------
// Gauss-Hermite
// ---------------------------------------------------------------------------

double Quadrature::expect(const std::function<double(double)>& g) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * g(nodes[i]);
    return acc;
}

double Quadrature::expect_scaled(double mu, double sigma,
                                 const std::function<double(double)>& g) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * g(mu + sigma * nodes[i]);
    return acc;
}

namespace {

// Orthonormal physicists' Hermite value and previous-order value at z; the
// derivative is sqrt(2n) * previous. Magnitudes stay O(1) in the
// oscillatory region, so no overflow for any practical order.
struct HermitePair {
    double h_n;
    double h_nm1;
};

HermitePair hermite_eval(int n, double z) {
    double p1 = 0.7511255444649425;  // pi^{-1/4}
    double p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
    }
    return {p1, p2};
}

}  // namespace

// Physicists' rule: positive roots located by a sign scan of the orthonormal
// recurrence (spacing never below ~pi/sqrt(2n), so a 16n grid cannot skip
// one), bisected and Newton-polished; then rescaled to the probabilist
// convention x -> sqrt(2) x, w -> w / sqrt(pi).
Quadrature gauss_hermite(int order) {
    require(order >= 2, errc::invalid_argument, "gauss_hermite: order must be >= 2");

    const int n = order;
    std::vector<double> x, w;
    x.reserve(n);
    w.reserve(n);

    const auto push_root = [&](double z) {
        // Newton polish
        HermitePair hp = hermite_eval(n, z);
        for (int it = 0; it < 8; ++it) {
            const double deriv = std::sqrt(2.0 * n) * hp.h_nm1;
            const double dz = hp.h_n / deriv;
            z -= dz;
            hp = hermite_eval(n, z);
            if (std::abs(dz) <= 1e-16 * std::max(1.0, std::abs(z))) break;
        }
        const double pp = std::sqrt(2.0 * n) * hp.h_nm1;
        x.push_back(z);
        w.push_back(2.0 / (pp * pp));
    };

    if (n % 2 == 1) push_root(0.0);
    const double edge = std::sqrt(2.0 * n + 1.0) + 1.0;
    const int grid = 16 * n;
    const double z0 = 0.25 * edge / grid;  // clear of the possible root at zero
    double zp = z0;
    double fp = hermite_eval(n, zp).h_n;
    for (int i = 1; i <= grid; ++i) {
        const double zi = z0 + (edge - z0) * i / grid;
        const double fi = hermite_eval(n, zi).h_n;
        if ((fp < 0) != (fi < 0)) {
            double lo = zp, hi_ = zi, flo = fp;
            for (int it = 0; it < 80 && hi_ - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi_);
                const double fm = hermite_eval(n, mid).h_n;
                if ((fm < 0) == (flo < 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi_ = mid;
                }
            }
            push_root(0.5 * (lo + hi_));
        }
        zp = zi;
        fp = fi;
    }
    require(static_cast<int>(x.size()) == (n + 1) / 2, errc::internal_error,
            "gauss_hermite: root scan miscounted");
    // mirror the negative half
    const int half = static_cast<int>(x.size());
    for (int i = n % 2; i < half; ++i) {
        x.push_back(-x[i]);
        w.push_back(w[i]);
    }

    // rescale to probabilist convention and sort nodes ascending
    Quadrature q;
    q.order = n;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double inv_sqrt_pi = 0.5641895835477563;
    std::vector<std::pair<double, double>> nw(n);
    for (int i = 0; i < n; ++i) nw[i] = {std::sqrt(2.0) * x[i], w[i] * inv_sqrt_pi};
    std::sort(nw.begin(), nw.end());
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = nw[i].first;
        q.weights[i] = nw[i].second;
    }
    return q;
}

// ---------------------------------------------------------------------------
// maximize_1d
// ---------------------------------------------------------------------------

namespace {

// Golden-section on [a, c] containing a maximum near b. Deterministic.
MaxResult golden_section(const std::function<double(double)>& f, double a, double b, double c,
                         double fb, double tol) {
    constexpr double R = 0.6180339887498949;
    constexpr double C = 1.0 - R;
    double x0 = a, x3 = c, x1, x2;
    if (std::abs(c - b) > std::abs(b - a)) {
        x1 = b;
        x2 = b + C * (c - b);
    } else {
        x2 = b;
        x1 = b - C * (b - a);
    }
    double f1 = (x1 == b) ? fb : f(x1);
    double f2 = (x2 == b) ? fb : f(x2);
    while (std::abs(x3 - x0) > tol) {
        if (f2 > f1) {
            x0 = x1;
            x1 = x2;
            x2 = R * x2 + C * x3;
            f1 = f2;
            f2 = f(x2);
        } else {
            x3 = x2;
            x2 = x1;
            x1 = R * x1 + C * x0;
            f2 = f1;
            f1 = f(x1);
        }
    }
    return f1 > f2 ? MaxResult{x1, f1} : MaxResult{x2, f2};
}

}  // namespace

MaxResult maximize_1d(const std::function<double(double)>& f, double lo, double hi, double tol,
                      int grid_points) {
    require(lo < hi, errc::invalid_argument, "maximize_1d: lo must be < hi");
    require(tol > 0, errc::invalid_argument, "maximize_1d: tol must be > 0");
    const int g = std::max(grid_points, 512);

    int best = 0;
    double best_f = -HUGE_VAL;
    for (int i = 0; i <= g; ++i) {
        const double xi = lo + (hi - lo) * i / g;
        const double v = f(xi);
        // -inf marks an excluded region and is tolerated; NaN/+inf are bugs.
        require(!std::isnan(v) && v != HUGE_VAL, errc::numeric_failure,
                "maximize_1d: objective returned NaN or +inf");
        if (v > best_f) {  // strict: ties keep the smaller argument
            best_f = v;
            best = i;
        }
    }
    const double step = (hi - lo) / g;
    const double xb = lo + step * best;
    const double a = std::max(lo, xb - step);
    const double c = std::min(hi, xb + step);
    MaxResult r{xb, best_f};
    if (c > a) {
        // midpoint as the interior probe keeps the triple valid when the
        // best sample is an endpoint of the search interval
        const double mid = 0.5 * (a + c);
        r = golden_section(f, a, mid, c, f(mid), tol);
        if (!(r.max > best_f)) r = {xb, best_f};
    }
    return r;
}

// ---------------------------------------------------------------------------
// Roots
// ---------------------------------------------------------------------------

double bisect(const std::function<double(double)>& f, Bracket b, double tol) {
    require(b.lo < b.hi, errc::invalid_argument, "bisect: malformed bracket");
    require((b.f_lo <= 0) != (b.f_hi <= 0) || b.f_lo == 0 || b.f_hi == 0, errc::invalid_argument,
            "bisect: no sign change");
    if (b.f_lo == 0) return b.lo;
    if (b.f_hi == 0) return b.hi;
    double lo = b.lo, hi = b.hi, flo = b.f_lo;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

void scan_brackets(const std::function<double(double)>& f, double lo, double hi, int grid,
                   std::vector<Bracket>& out) {
    double xp = lo, fp = f(lo);
    for (int i = 1; i <= grid; ++i) {
        const double xi = lo + (hi - lo) * i / grid;
        const double fi = f(xi);
        if (fp == 0.0) {
            out.push_back({xp, xp, 0.0, 0.0});
        } else if (fi != 0.0 && (fp < 0) != (fi < 0)) {
            out.push_back({xp, xi, fp, fi});
        }
        xp = xi;
        fp = fi;
    }
    if (fp == 0.0) out.push_back({xp, xp, 0.0, 0.0});
}

}  // namespace

std::vector<double> find_roots_1d(const std::function<double(double)>& f, double lo, double hi,
                                  int grid, double tol) {
    require(lo < hi, errc::invalid_argument, "find_roots_1d: malformed range");
    require(grid >= 16, errc::invalid_argument, "find_roots_1d: grid must be >= 16");

    std::vector<Bracket> coarse;
    scan_brackets(f, lo, hi, grid, coarse);

    // Rescan each coarse bracket at 10x resolution; nearby roots inside one
    // coarse cell separate here.
    std::vector<double> roots;
    for (const Bracket& b : coarse) {
        if (b.lo == b.hi) {
            roots.push_back(b.lo);
            continue;
        }
        std::vector<Bracket> fine;
        scan_brackets(f, b.lo, b.hi, 10, fine);
        if (fine.empty()) fine.push_back(b);
        for (const Bracket& fb : fine)
            roots.push_back(fb.lo == fb.hi ? fb.lo : bisect(f, fb, tol));
    }

    std::sort(roots.begin(), roots.end());
    // collapse duplicates from exact-zero grid hits
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return std::abs(a - b) <= tol; }),
                roots.end());
    return roots;
}

// ---------------------------------------------------------------------------
// Adaptive Simpson
// ---------------------------------------------------------------------------

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    require(std::isfinite(flm) && std::isfinite(frm), errc::numeric_failure,
            "integrate_adaptive: non-finite integrand");
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b);
    const double m = 0.5 * (a + b), fm = f(m);
    require(std::isfinite(fa) && std::isfinite(fb) && std::isfinite(fm), errc::numeric_failure,
            "integrate_adaptive: non-finite integrand");
    return adapt(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 48);
}

// ---------------------------------------------------------------------------
// RngStream (splitmix64-seeded xoshiro256++)
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    for (auto& si : s_) si = splitmix64(sm);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_uniform() {
    // 53-bit mantissa, shifted into (0, 1]
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

// ---------------------------------------------------------------------------
// Accumulators
// ---------------------------------------------------------------------------

void MeanAccumulator::add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / n_;
    m2_ += d * (x - mean_);
}

void MeanAccumulator::merge(const MeanAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double d = o.mean_ - mean_;
    const std::int64_t n = n_ + o.n_;
    m2_ += o.m2_ + d * d * (static_cast<double>(n_) * o.n_ / n);
    mean_ += d * o.n_ / n;
    n_ = n;
}

double MeanAccumulator::variance() const { return n_ > 1 ? m2_ / (n_ - 1) : 0.0; }

double MeanAccumulator::std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

void CovAccumulator::add(double x, double y) {
    ++n_;
    const double dx = x - mx_;
    mx_ += dx / n_;
    my_ += (y - my_) / n_;
    cxy_ += dx * (y - my_);
}

void CovAccumulator::merge(const CovAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double dx = o.mx_ - mx_;
    const double dy = o.my_ - my_;
    const std::int64_t n = n_ + o.n_;
    cxy_ += o.cxy_ + dx * dy * (static_cast<double>(n_) * o.n_ / n);
    mx_ += dx * o.n_ / n;
    my_ += dy * o.n_ / n;
    n_ = n;
}

double CovAccumulator::covariance() const { return n_ > 1 ? cxy_ / (n_ - 1) : 0.0; }

// ---------------------------------------------------------------------------
// parallel_for
// ---------------------------------------------------------------------------

namespace {
std::atomic<int> g_threads{1};
}

int default_threads() { return g_threads.load(); }

void set_default_threads(int n) { g_threads.store(std::max(1, n)); }

void parallel_for(int batches, int threads, const std::function<void(int)>& fn) {
    threads = std::min(std::max(1, threads), batches);
    if (threads <= 1 || batches <= 1) {
        for (int i = 0; i < batches; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < batches; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mmselab::num
