#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mmselab/emit.hpp"
#include "mmselab/errors.hpp"
#include "mmselab/sweep.hpp"

#include <json.hpp>

using namespace mmselab;

TEST_CASE("beta grids") {
    const std::vector<double> lin = sweep::beta_grid({1.0, 2.0, 5, false});
    CHECK(lin.front() == 1.0);
    CHECK(lin.back() == 2.0);
    CHECK(lin[2] == doctest::Approx(1.5));
    const std::vector<double> lg = sweep::beta_grid({0.1, 10.0, 3, true});
    CHECK(lg[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(sweep::beta_grid({2.0, 1.0, 5, false}), error);
    CHECK_THROWS_AS(sweep::beta_grid({1.0, 2.0, 1, false}), error);
}

TEST_CASE("iid sweep yields closed-form rows") {
    const sweep::ModelParams model = iid::IidParams{1.0};
    const auto curve = sweep::run_sweep(model, {0.5, 1.5, 3, false});
    REQUIRE(curve.size() == 3);
    CHECK(curve[1].beta == doctest::Approx(1.0));
    CHECK(curve[1].mmse_per_n == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(curve[1].psi_per_n == doctest::Approx(0.5 + 0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(curve[1].branch == "gaussian");
    CHECK_FALSE(curve[1].m_star.has_value());
}

TEST_CASE("sphere sweep: branch flips exactly once, at beta_R") {
    const sphere::SphereParams p{1.0, 0.5};
    const sweep::ModelParams model = p;
    const auto curve = sweep::run_sweep(model, {0.5, 4.0, 120, false});
    int flips = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].branch != curve[i - 1].branch) ++flips;
    CHECK(flips == 1);
    const double br = sphere::beta_r(p);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].branch != curve[i - 1].branch) {
            CHECK(curve[i - 1].beta < br);
            CHECK(curve[i].beta >= br);
        }
    }
}

TEST_CASE("transition detection: sphere first-order jump at beta_R") {
    const sphere::SphereParams p{1.0, 0.5};
    const sweep::ModelParams model = p;
    const auto curve = sweep::run_sweep(model, {0.5, 4.0, 200, false});
    const sweep::TransitionReport rep = sweep::detect_transitions(model, curve);
    REQUIRE(rep.transitions.size() == 1);
    const sweep::PhaseTransition& t = rep.transitions.front();
    CHECK(t.order == sweep::TransitionOrder::first);
    CHECK(std::abs(t.beta_c - (std::exp(1.0) - 1.0)) < 1e-4);
    CHECK(std::abs(t.left_mmse - std::exp(-1.0)) < 1e-6);
    CHECK(t.right_mmse == 0.0);
    CHECK(t.branch_left == "paramagnetic");
    CHECK(t.branch_right == "frozen");
}

TEST_CASE("transition detection: broadcast double jump at the reference point") {
    const bc::BroadcastParams p{0.1, 0.6206, 0.7129};
    const sweep::ModelParams model = p;
    const auto curve = sweep::run_sweep(model, {0.1, 10.0, 200, true});
    const sweep::TransitionReport rep = sweep::detect_transitions(model, curve);
    REQUIRE(rep.transitions.size() == 2);
    CHECK(std::abs(rep.transitions[0].beta_c - 0.5545) < 1e-3);
    CHECK(std::abs(rep.transitions[1].beta_c - 5.001) < 1e-2);
    CHECK(rep.transitions[0].order == sweep::TransitionOrder::first);
    CHECK(rep.transitions[1].order == sweep::TransitionOrder::first);
    CHECK(rep.transitions[0].left_mmse > rep.transitions[0].right_mmse);
    CHECK(rep.transitions[1].right_mmse == 0.0);
}

TEST_CASE("transition detection: smooth models stay quiet even at tiny tolerance") {
    const sweep::ModelParams model = iid::IidParams{1.0};
    const auto curve = sweep::run_sweep(model, {0.1, 10.0, 200, true});
    const sweep::TransitionReport rep = sweep::detect_transitions(curve, 1e-6, 1e-2);
    CHECK(rep.transitions.empty());
}

TEST_CASE("tree sweep transitions for the split-rate case") {
    const tree::TreeParams p{0.5, 0.2, 0.8};
    const sweep::ModelParams model = p;
    const auto curve = sweep::run_sweep(model, {0.1, 8.0, 300, false});
    const sweep::TransitionReport rep = sweep::detect_transitions(model, curve);
    REQUIRE(rep.transitions.size() == 2);
    CHECK(std::abs(rep.transitions[0].beta_c - std::expm1(0.4)) < 1e-4);
    CHECK(std::abs(rep.transitions[1].beta_c - std::expm1(1.6)) < 1e-4);
}

TEST_CASE("unsorted curves are rejected") {
    const sweep::ModelParams model = iid::IidParams{1.0};
    auto curve = sweep::run_sweep(model, {0.5, 1.5, 16, false});
    std::swap(curve[3], curve[4]);
    CHECK_THROWS_AS(sweep::detect_transitions(curve), error);
}

TEST_CASE("sparse sweep rows carry the dominant magnetization") {
    sparse::SparseParams p;
    p.sigma2 = 1.0;
    p.prior = sparse::PriorExponent::quadratic(0.5, 1.2);
    const sweep::ModelParams model = p;
    const auto curve = sweep::run_sweep(model, {0.5, 2.0, 4, false});
    for (const auto& pt : curve) {
        REQUIRE(pt.m_star.has_value());
        CHECK(std::abs(*pt.m_star) < 1.0);
        CHECK(pt.branch == "single");
        CHECK(pt.i_per_n == doctest::Approx(pt.psi_per_n - 0.5));
    }
}

TEST_CASE("csv emission: header, schema and 17-digit round trip") {
    const sweep::ModelParams model = iid::IidParams{1.0};
    const auto curve = sweep::run_sweep(model, {0.5, 1.5, 2, false});
    emit::Metadata meta;
    meta.model = "iid";
    meta.add("px", 1.0);
    meta.seed = 7;
    std::ostringstream os;
    emit::write_curve(os, emit::Format::csv, meta, curve);
    const std::string text = os.str();
    CHECK(text.rfind("# model=iid", 0) == 0);
    CHECK(text.find("beta,psi_per_n,i_per_n,mmse_per_n,m_star,branch\n") != std::string::npos);
    // two data rows + header + column line
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 4);
}

TEST_CASE("json emission round-trips bitwise") {
    sparse::SparseParams sp;
    sp.sigma2 = 1.0;
    sp.prior = sparse::PriorExponent::quadratic(0.5, 1.2);
    const sweep::ModelParams model = sp;
    const auto curve = sweep::run_sweep(model, {0.3, 2.7, 5, true});
    emit::Metadata meta;
    meta.model = "sparse";
    meta.add("sigma2", 1.0);
    meta.seed = 1;
    std::ostringstream os;
    emit::write_curve(os, emit::Format::json, meta, curve);

    const nlohmann::json doc = nlohmann::json::parse(os.str());
    CHECK(doc["model"] == "sparse");
    REQUIRE(doc["points"].size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(doc["points"][i]["beta"].get<double>() == curve[i].beta);
        CHECK(doc["points"][i]["psi_per_n"].get<double>() == curve[i].psi_per_n);
        CHECK(doc["points"][i]["i_per_n"].get<double>() == curve[i].i_per_n);
        CHECK(doc["points"][i]["mmse_per_n"].get<double>() == curve[i].mmse_per_n);
        CHECK(doc["points"][i]["m_star"].get<double>() == *curve[i].m_star);
        CHECK(doc["points"][i]["branch"].get<std::string>() == curve[i].branch);
    }
}

TEST_CASE("branch vocabulary is the documented closed set per model") {
    const auto check_labels = [](const sweep::ModelParams& model,
                                 const std::vector<std::string>& allowed) {
        const auto curve = sweep::run_sweep(model, {0.1, 12.0, 60, true});
        for (const auto& pt : curve) {
            bool ok = false;
            for (const auto& lbl : allowed) ok = ok || pt.branch == lbl;
            CHECK(ok);
        }
    };
    check_labels(iid::IidParams{1.0}, {"gaussian"});
    check_labels(sphere::SphereParams{1.0, 0.5}, {"paramagnetic", "frozen"});
    check_labels(bc::BroadcastParams{0.1, 0.6206, 0.7129},
                 {"no-decode", "cloud-only", "full-decode"});
    check_labels(tree::TreeParams{0.5, 0.2, 0.8},
                 {"no-decode", "segment1-only", "full-decode"});
}

TEST_CASE("discrete I-MMSE consistency along a sweep") {
    // trapezoidal integral of mmse/2 between smooth points matches the
    // increment of I/n to the grid-limited tolerance
    const sweep::ModelParams model = iid::IidParams{1.0};
    const auto curve = sweep::run_sweep(model, {0.5, 4.0, 100, false});
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double db = curve[i].beta - curve[i - 1].beta;
        const double trap = 0.25 * (curve[i].mmse_per_n + curve[i - 1].mmse_per_n) * db;
        CHECK(std::abs(trap - (curve[i].i_per_n - curve[i - 1].i_per_n)) < 1e-3);
    }
}
