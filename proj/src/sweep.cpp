#include "mmselab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>

#include "mmselab/errors.hpp"
#include "mmselab/numerics.hpp"

namespace mmselab::sweep {

std::string model_name(const ModelParams& m) {
    struct Visitor {
        std::string operator()(const iid::IidParams&) const { return "iid"; }
        std::string operator()(const sphere::SphereParams&) const { return "sphere"; }
        std::string operator()(const bc::BroadcastParams&) const { return "broadcast"; }
        std::string operator()(const tree::TreeParams&) const { return "tree"; }
        std::string operator()(const sparse::SparseParams&) const { return "sparse"; }
    };
    return std::visit(Visitor{}, m);
}

void validate(const SweepSpec& s) {
    require(s.beta_min > 0 && s.beta_min < s.beta_max, errc::invalid_argument,
            "sweep: need 0 < beta_min < beta_max");
    require(s.points >= 2, errc::invalid_argument, "sweep: points must be >= 2");
}

std::vector<double> beta_grid(const SweepSpec& s) {
    validate(s);
    std::vector<double> betas(s.points);
    if (s.log_scale) {
        const double l0 = std::log(s.beta_min), l1 = std::log(s.beta_max);
        for (int i = 0; i < s.points; ++i)
            betas[i] = std::exp(l0 + (l1 - l0) * i / (s.points - 1));
    } else {
        for (int i = 0; i < s.points; ++i)
            betas[i] = s.beta_min + (s.beta_max - s.beta_min) * i / (s.points - 1);
    }
    betas.front() = s.beta_min;
    betas.back() = s.beta_max;
    return betas;
}

CurvePoint eval_point(const ModelParams& model, double beta) {
    CurvePoint pt;
    pt.beta = beta;
    try {
        if (const auto* p = std::get_if<iid::IidParams>(&model)) {
            pt.psi_per_n = iid::free_energy_per_n(*p, beta);
            pt.i_per_n = iid::mutual_info_per_n(*p, beta);
            pt.mmse_per_n = iid::mmse_per_n(*p, beta);
            pt.branch = "gaussian";
        } else if (const auto* p = std::get_if<sphere::SphereParams>(&model)) {
            const sphere::FreeEnergy fe = sphere::free_energy_per_n(*p, beta);
            pt.psi_per_n = fe.psi_per_n;
            pt.i_per_n = fe.psi_per_n - 0.5;
            pt.mmse_per_n = sphere::mmse_per_n(*p, beta);
            pt.branch = sphere::branch_name(fe.branch);
        } else if (const auto* p = std::get_if<bc::BroadcastParams>(&model)) {
            const bc::MutualInfo mi = bc::mutual_info_per_n(*p, beta);
            pt.psi_per_n = mi.value + 0.5;
            pt.i_per_n = mi.value;
            pt.mmse_per_n = bc::mmse_per_n(*p, beta);
            pt.branch = bc::branch_name(mi.branch);
        } else if (const auto* p = std::get_if<tree::TreeParams>(&model)) {
            const tree::FreeEnergy fe = tree::free_energy_per_n(*p, beta);
            pt.psi_per_n = fe.psi_per_n;
            pt.i_per_n = fe.psi_per_n - 0.5;
            pt.mmse_per_n = tree::mmse_per_n(*p, beta);
            pt.branch = tree::branch_name(fe.branch);
        } else {
            const auto& sp = std::get<sparse::SparseParams>(model);
            const sparse::Dominant dom = sparse::dominant(sp, beta);
            pt.m_star = dom.branch.m;
            pt.i_per_n = sparse::mutual_info_per_n(sp, beta);
            pt.psi_per_n = pt.i_per_n + 0.5;
            pt.mmse_per_n = dom.coexistence || !sp.prior.is_quadratic()
                                ? std::numeric_limits<double>::quiet_NaN()
                                : sparse::mmse_per_n(sp, beta);
            pt.branch = dom.coexistence ? "coexistence" : "single";
        }
    } catch (const error& e) {
        throw error(e.kind(), std::string(e.what()) + " (at beta=" + std::to_string(beta) + ")");
    }
    return pt;
}

std::vector<CurvePoint> run_sweep(const ModelParams& model, const SweepSpec& spec) {
    const std::vector<double> betas = beta_grid(spec);
    std::vector<CurvePoint> out(betas.size());
    std::exception_ptr err;
    std::mutex err_mu;
    num::parallel_for(static_cast<int>(betas.size()), num::default_threads(), [&](int i) {
        try {
            out[i] = eval_point(model, betas[i]);
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!err) err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);
    return out;
}

namespace {

double model_mmse(const ModelParams& model, double beta) {
    return eval_point(model, beta).mmse_per_n;
}

// Locates a discontinuity of g between a and b by keeping the half with the
// larger change.
double locate_jump(const std::function<double(double)>& g, double a, double b) {
    double ga = g(a), gb = g(b);
    for (int it = 0; it < 80 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (std::abs(gm - ga) >= std::abs(gb - gm)) {
            b = mid;
            gb = gm;
        } else {
            a = mid;
            ga = gm;
        }
    }
    return 0.5 * (a + b);
}

TransitionReport detect_impl(const ModelParams* model, const std::vector<CurvePoint>& curve,
                             double jump_tol, double kink_tol) {
    require(curve.size() >= 8, errc::invalid_argument,
            "detect_transitions: need at least 8 curve points");
    for (std::size_t i = 1; i < curve.size(); ++i)
        require(curve[i].beta > curve[i - 1].beta, errc::invalid_argument,
                "detect_transitions: curve must be sorted by beta");

    TransitionReport rep;
    const auto scale = [](double a, double b) { return std::max({1.0, std::abs(a), std::abs(b)}); };

    // first order: adjacent-gap test
    std::vector<bool> used(curve.size(), false);
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const double gap = std::abs(curve[i + 1].mmse_per_n - curve[i].mmse_per_n);
        if (!(gap > jump_tol * scale(curve[i].mmse_per_n, curve[i + 1].mmse_per_n))) continue;
        // ignore plain steep slopes: compare against neighbour gaps
        const double prev = i > 0 ? std::abs(curve[i].mmse_per_n - curve[i - 1].mmse_per_n) : 0.0;
        const double next = i + 2 < curve.size()
                                ? std::abs(curve[i + 2].mmse_per_n - curve[i + 1].mmse_per_n)
                                : 0.0;
        if (gap < 3.0 * std::max(prev, next)) continue;

        PhaseTransition t;
        t.order = TransitionOrder::first;
        if (model) {
            t.beta_c = locate_jump([&](double b) { return model_mmse(*model, b); },
                                   curve[i].beta, curve[i + 1].beta);
            const double db = 1e-9 * std::max(1.0, t.beta_c);
            const CurvePoint l = eval_point(*model, t.beta_c - db);
            const CurvePoint r = eval_point(*model, t.beta_c + db);
            t.left_mmse = l.mmse_per_n;
            t.right_mmse = r.mmse_per_n;
            t.branch_left = l.branch;
            t.branch_right = r.branch;
        } else {
            t.beta_c = 0.5 * (curve[i].beta + curve[i + 1].beta);
            t.left_mmse = curve[i].mmse_per_n;
            t.right_mmse = curve[i + 1].mmse_per_n;
            t.branch_left = curve[i].branch;
            t.branch_right = curve[i + 1].branch;
        }
        used[i] = used[i + 1] = true;
        rep.transitions.push_back(t);
    }

    // second order: slope-jump test on interior points. A kink keeps its
    // finite slope gap as the grid refines while smooth curvature produces
    // comparable gaps at the neighbours, so the gap must also dominate them.
    std::vector<double> slope(curve.size() - 1);
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
        slope[i] =
            (curve[i + 1].mmse_per_n - curve[i].mmse_per_n) / (curve[i + 1].beta - curve[i].beta);
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        if (used[i] || used[i - 1] || used[i + 1]) continue;
        const double gap = std::abs(slope[i] - slope[i - 1]);
        if (!(gap > kink_tol * scale(curve[i].mmse_per_n, 0.0))) continue;
        const double prev = i >= 2 ? std::abs(slope[i - 1] - slope[i - 2]) : 0.0;
        const double next = i + 1 < slope.size() ? std::abs(slope[i + 1] - slope[i]) : 0.0;
        if (gap < 3.0 * std::max(prev, next)) continue;
        PhaseTransition t;
        t.order = TransitionOrder::second;
        t.beta_c = curve[i].beta;
        t.left_mmse = curve[i].mmse_per_n;
        t.right_mmse = curve[i].mmse_per_n;
        t.branch_left = curve[i - 1].branch;
        t.branch_right = curve[i + 1].branch;
        rep.transitions.push_back(t);
    }

    std::sort(rep.transitions.begin(), rep.transitions.end(),
              [](const PhaseTransition& a, const PhaseTransition& b) { return a.beta_c < b.beta_c; });
    return rep;
}

}  // namespace

TransitionReport detect_transitions(const std::vector<CurvePoint>& curve, double jump_tol,
                                    double kink_tol) {
    return detect_impl(nullptr, curve, jump_tol, kink_tol);
}

TransitionReport detect_transitions(const ModelParams& model, const std::vector<CurvePoint>& curve,
                                    double jump_tol, double kink_tol) {
    return detect_impl(&model, curve, jump_tol, kink_tol);
}

}  // namespace mmselab::sweep
