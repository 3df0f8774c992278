#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>

#include "motifcut/common.hpp"
#include "motifcut/eval.hpp"
#include "motifcut/graph_io.hpp"
#include "motifcut/mechanism.hpp"
#include "motifcut/noise.hpp"
#include "motifcut/sdp.hpp"
#include "motifcut/triangle.hpp"
#include "motifcut/weighted_graph.hpp"

using namespace motifcut;

namespace {

WeightedGraph unit_complete(int n) {
    WeightedGraph g(n);
    for (double& v : g.w) v = 1.0;
    return g;
}

// A graph pair with a signed adjacency difference, as released baselines have.
std::pair<WeightedGraph, WeightedGraph> noisy_pair(int n, std::uint64_t seed) {
    NoiseStream gen_stream(seed);
    const WeightedGraph g1 = gen_gnp(n, 0.7, gen_stream);
    NoiseStream stream(seed + 1000);
    const WeightedGraph g2 = randomized_response(g1, 2.0, stream);
    return {g1, g2};
}

}  // namespace

TEST_CASE("cut sweeps hit the worked maxima") {
    const CutErrorResult tri = max_cut_error(unit_complete(3), WeightedGraph(3));
    CHECK(tri.max_error == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tri.cuts_evaluated == 3);
    CHECK(tri.argmax_side == std::vector<int>{0});  // every bipartition ties at 1

    const CutErrorResult quad = max_cut_error(unit_complete(4), WeightedGraph(4));
    CHECK(quad.max_error == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(quad.cuts_evaluated == 7);
    CHECK(quad.argmax_side == std::vector<int>{0, 1});  // first balanced split

    // Identical graphs: every cut difference is zero.
    const CutErrorResult same = max_cut_error(unit_complete(5), unit_complete(5));
    CHECK(same.max_error == 0.0);
}

TEST_CASE("gray-code sweep agrees with the from-scratch reference") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto [g1, g2] = noisy_pair(4 + static_cast<int>(seed % 4), seed);
        const CutErrorResult fast = max_cut_error(g1, g2);
        const CutErrorResult slow = max_cut_error_naive(g1, g2);
        CHECK(fast.cuts_evaluated == slow.cuts_evaluated);
        CHECK(fast.max_error ==
              doctest::Approx(slow.max_error).epsilon(1e-11));
    }
}

TEST_CASE("sampled sweeps evaluate exactly the requested distinct cuts") {
    const auto [g1, g2] = noisy_pair(6, 42);
    const CutErrorResult full = max_cut_error(g1, g2);

    const CutErrorResult sampled = max_cut_error(g1, g2, CutMode::sampled(10, 7));
    CHECK(sampled.cuts_evaluated == 10);
    CHECK(sampled.max_error <= full.max_error + 1e-12);

    const CutErrorResult replay = max_cut_error(g1, g2, CutMode::sampled(10, 7));
    CHECK(replay.max_error == sampled.max_error);
    CHECK(replay.argmax_side == sampled.argmax_side);

    // Requesting every distinct bipartition reproduces the exhaustive answer.
    const CutErrorResult all = max_cut_error(g1, g2, CutMode::sampled(31, 3));
    CHECK(all.max_error == doctest::Approx(full.max_error).epsilon(1e-12));

    CHECK_THROWS_AS(max_cut_error(g1, g2, CutMode::sampled(0, 1)), ConfigError);
    CHECK_THROWS_AS(max_cut_error(g1, g2, CutMode::sampled(32, 1)), ConfigError);
}

TEST_CASE("cut sweeps reject oversized or mismatched inputs") {
    CHECK_THROWS_AS(max_cut_error(WeightedGraph(23), WeightedGraph(23)), ConfigError);
    CHECK_THROWS_AS(max_cut_error_naive(WeightedGraph(21), WeightedGraph(21)), ConfigError);
    CHECK_THROWS_AS(max_cut_error(WeightedGraph(4), WeightedGraph(5)), InputError);
    CHECK_THROWS_AS(max_cut_error(WeightedGraph(1), WeightedGraph(1)), InputError);
}

TEST_CASE("projection reference solves worked instances") {
    Eigen::VectorXd y(2), u(2);
    y << 10.0, 1.0;
    u << 1.0, 5.0;
    const Eigen::VectorXd capped = brute_force_md_oracle(y, 2.0, u);
    CHECK(capped(0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(capped(1) == doctest::Approx(1.0).epsilon(1e-11));

    // Without binding caps the split is proportional to the scores.
    Eigen::VectorXd y3(3);
    y3 << 2.0, 3.0, 5.0;
    const Eigen::VectorXd inf3 =
        Eigen::VectorXd::Constant(3, std::numeric_limits<double>::infinity());
    const Eigen::VectorXd open = brute_force_md_oracle(y3, 4.0, inf3);
    CHECK(open(0) == doctest::Approx(0.8).epsilon(1e-11));
    CHECK(open(1) == doctest::Approx(1.2).epsilon(1e-11));
    CHECK(open(2) == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(kkt_check(open, y3, 4.0, inf3, 1e-8).ok);

    // Caps exactly exhausting the budget force w = u.
    Eigen::VectorXd tight(2);
    tight << 1.0, 3.0;
    const Eigen::VectorXd at_caps = brute_force_md_oracle(y, 4.0, tight);
    CHECK((at_caps - tight).cwiseAbs().maxCoeff() == 0.0);
    const KktReport caps_rep = kkt_check(at_caps, y, 4.0, tight, 1e-10);
    CHECK(caps_rep.ok);
    CHECK(caps_rep.detail.find("caps") != std::string::npos);

    CHECK_THROWS_AS(brute_force_md_oracle(Eigen::VectorXd(), 1.0, Eigen::VectorXd()), ConfigError);
    CHECK_THROWS_AS(brute_force_md_oracle(y, 0.0, u), ConfigError);
    CHECK_THROWS_AS(brute_force_md_oracle(y, 7.0, u), ConfigError);  // budget above cap sum
    Eigen::VectorXd flat(2);
    flat << 1.0, 0.0;
    CHECK_THROWS_AS(brute_force_md_oracle(flat, 1.0, u), ConfigError);
    CHECK_THROWS_AS(brute_force_md_oracle(y, 1.0, flat), ConfigError);
}

TEST_CASE("optimality check rejects non-solutions") {
    Eigen::VectorXd y(2), u(2);
    y << 1.0, 0.1;
    u << 1.0, 5.0;

    // The true solution is (1, 1); moving mass off the cap keeps the budget
    // but breaks complementary slackness.
    Eigen::VectorXd moved(2);
    moved << 0.9, 1.1;
    const KktReport slack = kkt_check(moved, y, 2.0, u, 1e-7);
    CHECK_FALSE(slack.ok);
    CHECK_FALSE(slack.detail.empty());

    Eigen::VectorXd short_budget(2);
    short_budget << 0.5, 0.5;
    CHECK_FALSE(kkt_check(short_budget, y, 2.0, u, 1e-7).ok);

    Eigen::VectorXd over_cap(2);
    over_cap << 1.5, 0.5;
    CHECK_FALSE(kkt_check(over_cap, y, 2.0, u, 1e-7).ok);

    Eigen::VectorXd at_caps(2);
    at_caps << 1.0, 5.0;
    CHECK_FALSE(kkt_check(at_caps, y, 5.9, u, 1e-7).ok);  // caps filled, budget short
}

TEST_CASE("hill-climbing reference matches the closed-form optimum") {
    const Eigen::MatrixXd m = block_embed(Eigen::MatrixXd::Identity(2, 2));
    CHECK(sdp_oracle_small(m, 1.0) == doctest::Approx(1.4246358550964382).epsilon(1e-4));
    CHECK(sdp_oracle_small(m, 3.0) == doctest::Approx(0.6341969792139811).epsilon(1e-4));

    CHECK_THROWS_AS(sdp_oracle_small(Eigen::MatrixXd::Zero(6, 6), 1.0), ConfigError);
    CHECK_THROWS_AS(sdp_oracle_small(m, 0.0), ConfigError);
    Eigen::MatrixXd skewed = Eigen::MatrixXd::Zero(4, 4);
    skewed(0, 1) = 1.0;
    CHECK_THROWS_AS(sdp_oracle_small(skewed, 1.0), ConfigError);
}

TEST_CASE("saddle value returns the inner argmax") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> unif(0.3, 1.2);
    const int n = 3;
    const PairIndexer px(n);
    Eigen::VectorXd ref(px.count()), caps(px.count()), w(px.count());
    for (Eigen::Index k = 0; k < px.count(); ++k) {
        ref(k) = unif(rng);
        caps(k) = unif(rng);
        w(k) = unif(rng);
    }
    const SaddleContext ctx =
        make_saddle_context(n, triangle_adjacency_raw(n, ref), ref, caps, 2.0);

    SdpPoint x;
    const double value = saddle_value(w, ctx, {}, nullptr, &x);
    CHECK(F_triangle(w, x.x, ctx) == value);
    CHECK(domain_residuals(x.x, n).worst() <= 1e-8);

    // No feasible X beats the returned maximizer by more than the solver tol.
    const double slack = 1e-5 * (1.0 + std::abs(value));
    CHECK(F_triangle(w, Eigen::MatrixXd::Identity(2 * n, 2 * n), ctx) <= value + slack);
    const Eigen::MatrixXd probe = 0.1 * Eigen::MatrixXd::Ones(2 * n, 2 * n) +
                                  0.9 * Eigen::MatrixXd::Identity(2 * n, 2 * n);
    CHECK(F_triangle(w, probe, ctx) <= value + slack);
}

TEST_CASE("danskin gradient matches central differences") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0.4, 1.1);
    const int n = 4;
    const PairIndexer px(n);
    Eigen::VectorXd ref(px.count()), caps(px.count()), w(px.count());
    for (Eigen::Index k = 0; k < px.count(); ++k) {
        ref(k) = unif(rng);
        caps(k) = unif(rng);
        w(k) = unif(rng);
    }
    const SaddleContext ctx =
        make_saddle_context(n, triangle_adjacency_raw(n, ref), ref, caps, 2.0);

    const Eigen::VectorXd grad = exact_gradient(w, ctx, 1e-9);
    SdpSolveOptions tight;
    tight.tol = 1e-9;
    const double h = 1e-4;
    for (Eigen::Index k = 0; k < px.count(); ++k) {
        Eigen::VectorXd hi = w, lo = w;
        hi(k) += h;
        lo(k) -= h;
        const double fd = (saddle_value(hi, ctx, tight) - saddle_value(lo, ctx, tight)) / (2.0 * h);
        CHECK(grad(k) == doctest::Approx(fd).epsilon(5e-4));
    }

    CHECK_THROWS_AS(exact_gradient(Eigen::VectorXd::Ones(2), ctx), ConfigError);
}
