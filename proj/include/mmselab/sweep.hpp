// Beta sweeps over any of the five models, producing per-point curve rows,
// plus transition detection on the resulting MMSE curve with bisection
// refinement against the model's own branch rule.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mmselab/broadcast.hpp"
#include "mmselab/iid.hpp"
#include "mmselab/sparse.hpp"
#include "mmselab/sphere.hpp"
#include "mmselab/tree.hpp"

namespace mmselab::sweep {

using ModelParams = std::variant<iid::IidParams, sphere::SphereParams, bc::BroadcastParams,
                                 tree::TreeParams, sparse::SparseParams>;

std::string model_name(const ModelParams& m);

struct SweepSpec {
    double beta_min = 0.1;
    double beta_max = 10.0;
    int points = 200;
    bool log_scale = false;
};

void validate(const SweepSpec& s);
std::vector<double> beta_grid(const SweepSpec& s);

struct CurvePoint {
    double beta;
    double psi_per_n;
    double i_per_n;
    double mmse_per_n;
    std::optional<double> m_star;  // sparse model only
    std::string branch;
};

// Single-point evaluation and full sweep (points evaluated independently,
// in parallel, assembled in beta order).
CurvePoint eval_point(const ModelParams& model, double beta);
std::vector<CurvePoint> run_sweep(const ModelParams& model, const SweepSpec& spec);

enum class TransitionOrder { first, second };

struct PhaseTransition {
    double beta_c;
    TransitionOrder order;
    double left_mmse;
    double right_mmse;
    std::string branch_left, branch_right;
};

struct TransitionReport {
    std::vector<PhaseTransition> transitions;
};

// First-order where adjacent MMSE values gap by more than jump_tol (scaled
// by the local magnitude); second-order where the discrete slope jumps by
// more than kink_tol. When the model is supplied the location is refined by
// bisection on its mmse rule; otherwise the grid midpoint is reported.
TransitionReport detect_transitions(const std::vector<CurvePoint>& curve, double jump_tol = 1e-3,
                                    double kink_tol = 1e-2);
TransitionReport detect_transitions(const ModelParams& model, const std::vector<CurvePoint>& curve,
                                    double jump_tol = 1e-3, double kink_tol = 1e-2);

}  // namespace mmselab::sweep
