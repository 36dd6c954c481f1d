// Command-line front end: beta sweeps, phase-transition reports, finite-n
// oracle runs and oracle-vs-asymptotics comparisons, emitted as CSV or
// JSON. Runs are pure functions of (arguments, seed): output is
// byte-identical across repetitions and thread counts.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmselab/emit.hpp"
#include "mmselab/errors.hpp"
#include "mmselab/numerics.hpp"
#include "mmselab/oracle.hpp"
#include "mmselab/relations.hpp"
#include "mmselab/sweep.hpp"

namespace {

using namespace mmselab;

struct CommonOpts {
    double beta_min = 0.1;
    double beta_max = 10.0;
    int points = 200;
    bool log_scale = false;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;
    int quad_order = 96;
    double jump_tol = 1e-3;
    double kink_tol = 1e-2;
    int threads = 1;
    bool transitions = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->set_config("--config", "", "flat key=value config file (flags override)");
    cmd->add_option("--beta-min", o.beta_min, "sweep start SNR");
    cmd->add_option("--beta-max", o.beta_max, "sweep end SNR");
    cmd->add_option("--points", o.points, "sweep grid size");
    cmd->add_flag("--log", o.log_scale, "log-spaced sweep grid");
    cmd->add_option("--out", o.out, "output path ('-' or empty for stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", o.seed, "base RNG seed");
    cmd->add_option("--quad-order", o.quad_order, "Gauss-Hermite order per mixture component");
    cmd->add_option("--jump-tol", o.jump_tol, "first-order transition detection tolerance");
    cmd->add_option("--kink-tol", o.kink_tol, "second-order transition detection tolerance");
    cmd->add_option("--threads", o.threads, "worker threads (output independent of this)");
    cmd->add_flag("--transitions", o.transitions,
                  "emit the transition report instead of the curve");
}

emit::Format parse_format(const std::string& f) {
    return f == "json" ? emit::Format::json : emit::Format::csv;
}

sweep::SweepSpec spec_of(const CommonOpts& o) {
    return {o.beta_min, o.beta_max, o.points, o.log_scale};
}

void run_model_command(const sweep::ModelParams& model, const CommonOpts& o,
                       emit::Metadata meta) {
    num::set_default_threads(o.threads);
    const std::vector<sweep::CurvePoint> curve = sweep::run_sweep(model, spec_of(o));
    emit::write_to(o.out, [&](std::ostream& os) {
        if (o.transitions) {
            const sweep::TransitionReport rep =
                sweep::detect_transitions(model, curve, o.jump_tol, o.kink_tol);
            emit::write_transitions(os, parse_format(o.format), meta, rep);
        } else {
            emit::write_curve(os, parse_format(o.format), meta, curve);
        }
    });
}

struct InstanceOpts {
    std::string model = "sparse";
    int n = 8;
    std::int64_t samples = 10000;
    // model parameters shared with the asymptotic side
    double px = 1.0, rate = 0.5;
    double r1 = 0.1, r2 = 0.6206, alpha = 0.7129;
    double lambda1 = 0.5;
    double sigma2 = 1.0, a = 1.0, b = 0.0;
};

void add_instance(CLI::App* cmd, InstanceOpts& io) {
    cmd->add_option("--model", io.model, "instance kind")
        ->check(CLI::IsMember({"iid", "sphere", "broadcast", "tree", "sparse"}));
    cmd->add_option("--n", io.n, "block length");
    cmd->add_option("--samples", io.samples, "Monte Carlo sample count");
    cmd->add_option("--px", io.px, "input power (iid/sphere)");
    cmd->add_option("--rate", io.rate, "code rate (sphere)");
    cmd->add_option("--r1", io.r1, "first rate (broadcast/tree)");
    cmd->add_option("--r2", io.r2, "second rate (broadcast/tree)");
    cmd->add_option("--alpha", io.alpha, "cloud power split (broadcast)");
    cmd->add_option("--lambda1", io.lambda1, "first-segment fraction (tree)");
    cmd->add_option("--sigma2", io.sigma2, "active-component variance (sparse)");
    cmd->add_option("--a", io.a, "prior linear coefficient (sparse)");
    cmd->add_option("--b", io.b, "prior quadratic coefficient (sparse)");
}

oracle::FiniteInstance make_instance(const InstanceOpts& io, std::uint64_t seed) {
    if (io.model == "sphere") return oracle::SphereCodeSpec{io.n, io.rate, io.px, seed};
    if (io.model == "broadcast")
        return oracle::BroadcastCodeSpec{io.n, io.r1, io.r2, io.alpha, seed};
    if (io.model == "tree") return oracle::TreeCodeSpec{io.n, io.lambda1, io.r1, io.r2, seed};
    if (io.model == "iid") {
        // all supports active: per-symbol prior mass on s=1 is 1 - O(e^{-80})
        return oracle::SparseSpec{io.n, io.px, sparse::PriorExponent::quadratic(-40.0, 0.0)};
    }
    return oracle::SparseSpec{io.n, io.sigma2, sparse::PriorExponent::quadratic(io.a, io.b)};
}

sweep::ModelParams make_model(const InstanceOpts& io, int quad_order) {
    if (io.model == "iid") return iid::IidParams{io.px};
    if (io.model == "sphere") return sphere::SphereParams{io.px, io.rate};
    if (io.model == "broadcast") return bc::BroadcastParams{io.r1, io.r2, io.alpha};
    if (io.model == "tree") return tree::TreeParams{io.lambda1, io.r1, io.r2};
    sparse::SparseParams sp;
    sp.sigma2 = io.sigma2;
    sp.prior = sparse::PriorExponent::quadratic(io.a, io.b);
    sp.quad_order = quad_order;
    return sp;
}

void fill_instance_meta(emit::Metadata& meta, const InstanceOpts& io) {
    meta.model = io.model;
    meta.add("n", static_cast<std::int64_t>(io.n));
    meta.add("samples", io.samples);
    if (io.model == "iid") meta.add("px", io.px);
    if (io.model == "sphere") {
        meta.add("px", io.px);
        meta.add("rate", io.rate);
    }
    if (io.model == "broadcast") {
        meta.add("r1", io.r1);
        meta.add("r2", io.r2);
        meta.add("alpha", io.alpha);
    }
    if (io.model == "tree") {
        meta.add("lambda1", io.lambda1);
        meta.add("r1", io.r1);
        meta.add("r2", io.r2);
    }
    if (io.model == "sparse") {
        meta.add("sigma2", io.sigma2);
        meta.add("a", io.a);
        meta.add("b", io.b);
    }
}

int run(int argc, char** argv) {
    CLI::App app{"asymptotic free energy / mutual information / MMSE curves for "
                 "signal estimation in Gaussian noise, with finite-n oracles"};
    app.require_subcommand(1);

    CommonOpts common;

    // --- closed-form / fixed-point model subcommands ---
    struct ModelCmd {
        CLI::App* cmd;
        std::function<sweep::ModelParams()> build;
        std::function<void(emit::Metadata&)> meta;
    };
    std::vector<ModelCmd> cmds;

    auto* iid_cmd = app.add_subcommand("iid", "Gaussian i.i.d. input curves");
    static double iid_px = 1.0;
    iid_cmd->add_option("--px", iid_px, "prior variance");
    cmds.push_back({iid_cmd, [] { return sweep::ModelParams{iid::IidParams{iid_px}}; },
                    [](emit::Metadata& m) { m.add("px", iid_px); }});

    auto* sph_cmd = app.add_subcommand("sphere", "spherical codebook curves");
    static double sph_px = 1.0, sph_rate = 0.5;
    sph_cmd->add_option("--px", sph_px, "codeword power");
    sph_cmd->add_option("--rate", sph_rate, "code rate (nats/symbol)");
    cmds.push_back({sph_cmd,
                    [] { return sweep::ModelParams{sphere::SphereParams{sph_px, sph_rate}}; },
                    [](emit::Metadata& m) {
                        m.add("px", sph_px);
                        m.add("rate", sph_rate);
                    }});

    auto* bc_cmd = app.add_subcommand("broadcast", "superposition ensemble curves");
    static double bc_r1 = 0.1, bc_r2 = 0.6206, bc_alpha = 0.7129;
    bc_cmd->add_option("--r1", bc_r1, "cloud rate");
    bc_cmd->add_option("--r2", bc_r2, "refinement rate");
    bc_cmd->add_option("--alpha", bc_alpha, "cloud power split");
    cmds.push_back({bc_cmd,
                    [] { return sweep::ModelParams{bc::BroadcastParams{bc_r1, bc_r2, bc_alpha}}; },
                    [](emit::Metadata& m) {
                        m.add("r1", bc_r1);
                        m.add("r2", bc_r2);
                        m.add("alpha", bc_alpha);
                    }});

    auto* tree_cmd = app.add_subcommand("tree", "two-segment tree code curves");
    static double tr_l1 = 0.5, tr_r1 = 0.2, tr_r2 = 0.8;
    tree_cmd->add_option("--lambda1", tr_l1, "first-segment fraction");
    tree_cmd->add_option("--r1", tr_r1, "first-segment rate");
    tree_cmd->add_option("--r2", tr_r2, "second-segment rate");
    cmds.push_back({tree_cmd,
                    [] { return sweep::ModelParams{tree::TreeParams{tr_l1, tr_r1, tr_r2}}; },
                    [](emit::Metadata& m) {
                        m.add("lambda1", tr_l1);
                        m.add("r1", tr_r1);
                        m.add("r2", tr_r2);
                    }});

    auto* sp_cmd = app.add_subcommand("sparse", "sparse-signal model curves");
    static double sp_sigma2 = 1.0, sp_a = 1.0, sp_b = 0.0;
    sp_cmd->add_option("--sigma2", sp_sigma2, "active-component variance");
    sp_cmd->add_option("--a", sp_a, "prior linear coefficient");
    sp_cmd->add_option("--b", sp_b, "prior quadratic coefficient");
    cmds.push_back({sp_cmd,
                    [&common] {
                        sparse::SparseParams sp;
                        sp.sigma2 = sp_sigma2;
                        sp.prior = sparse::PriorExponent::quadratic(sp_a, sp_b);
                        sp.quad_order = common.quad_order;
                        return sweep::ModelParams{sp};
                    },
                    [](emit::Metadata& m) {
                        m.add("sigma2", sp_sigma2);
                        m.add("a", sp_a);
                        m.add("b", sp_b);
                    }});

    for (ModelCmd& mc : cmds) add_common(mc.cmd, common);

    // --- oracle ---
    auto* or_cmd = app.add_subcommand("oracle", "finite-n Monte Carlo curves");
    static InstanceOpts or_inst;
    add_instance(or_cmd, or_inst);
    add_common(or_cmd, common);

    // --- compare ---
    auto* cmp_cmd = app.add_subcommand("compare", "oracle vs asymptotics table");
    static InstanceOpts cmp_inst;
    add_instance(cmp_cmd, cmp_inst);
    add_common(cmp_cmd, common);

    CLI11_PARSE(app, argc, argv);

    for (const ModelCmd& mc : cmds) {
        if (!mc.cmd->parsed()) continue;
        emit::Metadata meta;
        const sweep::ModelParams model = mc.build();
        meta.model = sweep::model_name(model);
        mc.meta(meta);
        meta.seed = common.seed;
        run_model_command(model, common, std::move(meta));
        return 0;
    }

    if (or_cmd->parsed()) {
        num::set_default_threads(common.threads);
        const oracle::FiniteInstance inst = make_instance(or_inst, common.seed);
        const std::vector<double> betas = sweep::beta_grid(spec_of(common));
        const auto est = oracle::sweep_estimates(inst, betas, or_inst.samples, common.seed);
        std::vector<emit::OracleRow> rows(betas.size());
        for (std::size_t i = 0; i < betas.size(); ++i) {
            rows[i] = {betas[i],
                       est[i].free_energy.value,
                       est[i].free_energy.std_err,
                       -0.5 + est[i].free_energy.value,
                       est[i].mmse.value,
                       est[i].mmse.std_err};
        }
        emit::Metadata meta;
        fill_instance_meta(meta, or_inst);
        meta.seed = common.seed;
        emit::write_to(common.out, [&](std::ostream& os) {
            emit::write_oracle_rows(os, parse_format(common.format), meta, rows);
        });
        return 0;
    }

    if (cmp_cmd->parsed()) {
        num::set_default_threads(common.threads);
        const oracle::FiniteInstance inst = make_instance(cmp_inst, common.seed);
        const sweep::ModelParams model = make_model(cmp_inst, common.quad_order);
        const std::vector<double> betas = sweep::beta_grid(spec_of(common));
        const auto est = oracle::sweep_estimates(inst, betas, cmp_inst.samples, common.seed);
        // exact at finite n: iid and non-interacting sparse factorize per symbol
        const bool exact = cmp_inst.model == "iid" ||
                           (cmp_inst.model == "sparse" && cmp_inst.b == 0.0);
        std::vector<emit::CompareRow> rows(betas.size());
        bool mismatch = false;
        for (std::size_t i = 0; i < betas.size(); ++i) {
            const double asym = sweep::eval_point(model, betas[i]).mmse_per_n;
            const double se = est[i].mmse.std_err;
            const double z = se > 0 ? (est[i].mmse.value - asym) / se : 0.0;
            rows[i] = {betas[i], asym, est[i].mmse.value, se, z, exact};
            if (exact && std::abs(z) > 4.0) mismatch = true;
        }
        emit::Metadata meta;
        fill_instance_meta(meta, cmp_inst);
        meta.seed = common.seed;
        emit::write_to(common.out, [&](std::ostream& os) {
            emit::write_compare_rows(os, parse_format(common.format), meta, rows);
        });
        return mismatch ? 4 : 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mmselab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
