#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "seminfo/experiments.hpp"
#include "seminfo/rate_fidelity.hpp"

using seminfo::Channel;
using seminfo::Distribution;
using seminfo::DistortionMatrix;
using seminfo::ErrorKind;
using seminfo::Matrix;
using seminfo::PayoffMatrix;
using seminfo::RateFidelityPoint;
using seminfo::SemanticChannel;
using seminfo::SolveOptions;
using seminfo::TruthFunction;
using testutil::check_close;
using testutil::expect_error;

namespace {

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Mutual information of a reported test channel (rows for zero-mass events
// are all-zero placeholders and contribute nothing).
double channel_information_bits(const Distribution& source, const Matrix& channel) {
    const std::size_t n = channel.rows();
    const std::size_t m = channel.cols();
    std::vector<double> marginal(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) marginal[j] += source[i] * channel(i, j);
    double info = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (source[i] == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            const double w = channel(i, j);
            if (w <= 0.0) continue;
            info += source[i] * w * std::log2(w / marginal[j]);
        }
    }
    return info;
}

double average_payoff_bits(const Distribution& source, const Matrix& channel,
                           const PayoffMatrix& payoff) {
    double g = 0.0;
    for (std::size_t i = 0; i < channel.rows(); ++i)
        for (std::size_t j = 0; j < channel.cols(); ++j)
            g += source[i] * channel(i, j) * payoff.values(i, j);
    return g;
}

}  // namespace

TEST_SUITE_BEGIN("rate_fidelity");

TEST_CASE("matrix wrappers validate their entries") {
    expect_error(ErrorKind::validation, "payoff matrix must be non-empty",
                 [] { PayoffMatrix p{Matrix()}; (void)p; });
    expect_error(ErrorKind::validation, "payoff entries must be finite", [] {
        PayoffMatrix p{Matrix::from_rows({{0.0, std::numeric_limits<double>::infinity()}})};
        (void)p;
    });
    expect_error(ErrorKind::validation, "distortion matrix must be non-empty",
                 [] { DistortionMatrix d{Matrix()}; (void)d; });
    expect_error(ErrorKind::validation, "distortion entries must be nonnegative", [] {
        DistortionMatrix d{Matrix::from_rows({{0.0, -1.0}})};
        (void)d;
    });
}

TEST_CASE("payoff from semantics") {
    // Tautologies: degree 1, logical probability 1, zero payoff everywhere.
    const Distribution prior({0.25, 0.75});
    const SemanticChannel flat({TruthFunction({1.0, 1.0}), TruthFunction({1.0, 1.0})});
    const PayoffMatrix zero = seminfo::payoff_from_semantics(prior, flat);
    for (double v : zero.values.data()) CHECK(v == 0.0);

    // Crisp halves of a fair prior: the floor turns the off-diagonal into a
    // large negative penalty instead of -infinity.
    const Distribution fair({0.5, 0.5});
    const SemanticChannel crisp({TruthFunction({1.0, 0.0}), TruthFunction({0.0, 1.0})});
    const PayoffMatrix p = seminfo::payoff_from_semantics(fair, crisp);
    check_close(p.values(0, 0), 0.9999999985573048, 1e-9);
    check_close(p.values(1, 1), 0.9999999985573048, 1e-9);
    check_close(p.values(0, 1), -28.897352855428956, 1e-9);
    check_close(p.values(1, 0), -28.897352855428956, 1e-9);

    // Where no degree hits the floor the columns agree with the pointwise
    // information values.
    const seminfo::Alphabet alphabet = seminfo::Alphabet::indexed(8);
    std::vector<TruthFunction> gaussians;
    for (int c = 0; c < 8; ++c) gaussians.push_back(seminfo::gaussian_truth(alphabet, c, 2.0));
    const SemanticChannel sem(gaussians);
    const Distribution uniform = Distribution::normalized(std::vector<double>(8, 1.0));
    const PayoffMatrix g = seminfo::payoff_from_semantics(uniform, sem);
    for (std::size_t j = 0; j < 8; ++j)
        for (std::size_t i = 0; i < 8; ++i)
            check_close(g.values(i, j),
                        seminfo::semantic_information(uniform, sem.message(j), i), 1e-12);

    expect_error(ErrorKind::validation, "share one alphabet", [&] {
        (void)seminfo::payoff_from_semantics(Distribution({0.2, 0.3, 0.5}), crisp);
    });
}

TEST_CASE("average distortion") {
    const Distribution fair({0.5, 0.5});
    const DistortionMatrix hamming{Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})};
    check_close(seminfo::average_distortion(
                    fair, Channel({Distribution({1.0, 0.0}), Distribution({0.0, 1.0})}), hamming),
                0.0, 1e-15);
    check_close(seminfo::average_distortion(
                    fair, Channel({Distribution({0.5, 0.5}), Distribution({0.5, 0.5})}), hamming),
                0.5, 1e-15);

    std::mt19937 rng(61);
    const Distribution source = testutil::random_distribution(rng, 3, 0.01);
    const Channel channel = testutil::random_channel(rng, 3, 3, 0.0);
    Matrix d(3, 3);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) d(i, j) = u(rng);
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) expected += source[i] * channel(i, j) * d(i, j);
    check_close(seminfo::average_distortion(source, channel, DistortionMatrix{d}), expected,
                1e-12);

    expect_error(ErrorKind::validation, "source size must match the channel", [&] {
        (void)seminfo::average_distortion(fair, channel, DistortionMatrix{d});
    });
    expect_error(ErrorKind::validation, "distortion matrix shape", [&] {
        (void)seminfo::average_distortion(source, channel, hamming);
    });
}

TEST_CASE("zero slope is solved analytically") {
    const Distribution source({0.3, 0.7});
    const PayoffMatrix payoff{Matrix::from_rows({{1.0, 0.0}, {0.0, 2.0}})};
    const RateFidelityPoint point = seminfo::solve_rate_fidelity_point(source, payoff, 0.0);
    CHECK(point.converged);
    CHECK(point.iterations == 0);
    check_close(point.rate, 0.0, 1e-15);
    check_close(point.fidelity, 1.4, 1e-15);  // best column average
    REQUIRE(point.output.size() == 2);
    check_close(point.output[0], 0.0, 1e-15);
    check_close(point.output[1], 1.0, 1e-15);
    check_close(point.channel(0, 1), 1.0, 1e-15);
    check_close(point.channel(1, 1), 1.0, 1e-15);
    CHECK(point.multipliers.size() == 2);

    // Ties resolve to the lowest message index.
    const PayoffMatrix tie{Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}})};
    const RateFidelityPoint t = seminfo::solve_rate_fidelity_point(source, tie, 0.0);
    check_close(t.output[0], 1.0, 1e-15);

    // Option validation is deferred to slopes that actually iterate.
    SolveOptions bad;
    bad.tolerance = -1.0;
    CHECK_NOTHROW((void)seminfo::solve_rate_fidelity_point(source, payoff, 0.0, bad));
}

TEST_CASE("slope and option validation") {
    const Distribution source({0.5, 0.5});
    const PayoffMatrix payoff{Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}})};

    expect_error(ErrorKind::validation, "slope must be nonnegative",
                 [&] { (void)seminfo::solve_rate_fidelity_point(source, payoff, -1.0); });

    SolveOptions bad_tol;
    bad_tol.tolerance = 0.0;
    expect_error(ErrorKind::validation, "solver tolerance must be positive", [&] {
        (void)seminfo::solve_rate_fidelity_point(source, payoff, 0.5, bad_tol);
    });
    SolveOptions bad_iter;
    bad_iter.max_iterations = 0;
    expect_error(ErrorKind::validation, "iteration budget must be at least 1", [&] {
        (void)seminfo::solve_rate_fidelity_point(source, payoff, 0.5, bad_iter);
    });

    expect_error(ErrorKind::validation, "source size must match the payoff row count", [&] {
        (void)seminfo::solve_rate_fidelity_point(Distribution({0.2, 0.3, 0.5}), payoff, 1.0);
    });

    const PayoffMatrix huge{Matrix::from_rows({{1000.0, 0.0}, {0.0, 1000.0}})};
    expect_error(ErrorKind::validation, "overflow at this slope",
                 [&] { (void)seminfo::solve_rate_fidelity_point(source, huge, 10.0); });
    const PayoffMatrix tiny{Matrix::from_rows({{-2000.0, -2000.0}, {-2000.0, -2000.0}})};
    expect_error(ErrorKind::validation, "underflow at this slope",
                 [&] { (void)seminfo::solve_rate_fidelity_point(source, tiny, 1.0); });

    SolveOptions bad_warm;
    bad_warm.warm_start = std::vector<double>{0.5, 0.3, 0.2};
    expect_error(ErrorKind::validation, "one weight per message", [&] {
        (void)seminfo::solve_rate_fidelity_point(source, payoff, 1.0, bad_warm);
    });
    bad_warm.warm_start = std::vector<double>{1.0, -0.5};
    expect_error(ErrorKind::validation, "warm start weights must be nonnegative", [&] {
        (void)seminfo::solve_rate_fidelity_point(source, payoff, 1.0, bad_warm);
    });

    expect_error(ErrorKind::validation, "slope grid must be non-empty",
                 [&] { (void)seminfo::sweep_rate_fidelity(source, payoff, {}); });
    expect_error(ErrorKind::validation, "strictly increasing",
                 [&] { (void)seminfo::sweep_rate_fidelity(source, payoff, {0.0, 1.0, 1.0}); });
}

TEST_CASE("constant payoff pins the curve at the origin") {
    const Distribution source({0.4, 0.6});
    const PayoffMatrix payoff{Matrix(2, 2, 0.0)};
    const auto curve = seminfo::sweep_rate_fidelity(source, payoff, {0.0, 1.0, 2.0});
    REQUIRE(curve.size() == 3);
    for (const RateFidelityPoint& point : curve) {
        CHECK(point.converged);
        check_close(point.rate, 0.0, 1e-12);
        check_close(point.fidelity, 0.0, 1e-12);
    }
}

TEST_CASE("binary hamming distortion matches the closed form") {
    const Distribution fair({0.5, 0.5});
    const DistortionMatrix hamming{Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})};
    std::vector<double> grid = {0.0};
    for (int i = 0; i < 19; ++i) grid.push_back(0.4 + i * (8.0 - 0.4) / 18.0);

    SolveOptions options;
    options.tolerance = 1e-12;
    const auto curve = seminfo::sweep_rate_distortion(fair, hamming, grid, options);
    REQUIRE(curve.size() == grid.size());
    double previous_distortion = 1.0;
    for (const seminfo::RateDistortionPoint& point : curve) {
        CHECK(point.converged);
        CHECK(point.distortion >= -1e-12);
        CHECK(point.distortion <= 0.5 + 1e-12);
        CHECK(point.distortion <= previous_distortion + 1e-12);
        previous_distortion = point.distortion;
        check_close(point.rate, 1.0 - binary_entropy(point.distortion), 1e-9);
    }
    check_close(curve.front().distortion, 0.5, 1e-12);
    check_close(curve.front().rate, 0.0, 1e-12);
}

TEST_CASE("steep slopes drive distortion to zero and rate to the entropy") {
    const Distribution source({0.3, 0.7});
    const DistortionMatrix d{Matrix::from_rows({{0.0, 2.0}, {1.0, 0.0}})};
    const auto curve = seminfo::sweep_rate_distortion(source, d, {12.0});
    REQUIRE(curve.size() == 1);
    CHECK(curve.front().converged);
    CHECK(curve.front().distortion < 1e-3);
    CHECK(curve.front().rate > binary_entropy(0.3) - 0.01);
    CHECK(curve.front().rate <= binary_entropy(0.3) + 1e-9);
}

TEST_CASE("solver self-consistency on a discrimination instance") {
    const auto [alphabet, source] = seminfo::gray_level_source(3);
    const SemanticChannel semantics = seminfo::discrimination_semantics(alphabet, 2.0);
    const PayoffMatrix payoff = seminfo::payoff_from_semantics(source, semantics);

    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) grid.push_back(i * 0.25);
    const auto curve = seminfo::sweep_rate_fidelity(source, payoff, grid);
    REQUIRE(curve.size() == grid.size());

    for (const RateFidelityPoint& point : curve) {
        CHECK(point.converged);
        // Rate is the mutual information of the reported channel.
        check_close(point.rate, channel_information_bits(source, point.channel), 1e-8);
        // Fidelity is the average payoff under the reported channel.
        check_close(point.fidelity, average_payoff_bits(source, point.channel, payoff), 1e-8);
        // The reported output marginal is consistent with the channel.
        std::vector<double> marginal(point.channel.cols(), 0.0);
        for (std::size_t i = 0; i < point.channel.rows(); ++i)
            for (std::size_t j = 0; j < point.channel.cols(); ++j)
                marginal[j] += source[i] * point.channel(i, j);
        double mass = 0.0;
        for (std::size_t j = 0; j < marginal.size(); ++j) {
            check_close(point.output[j], marginal[j] < 1e-14 ? 0.0 : marginal[j], 5e-9);
            mass += point.output[j];
        }
        check_close(mass, 1.0, 1e-9);
        // Semantics-derived payoffs never let fidelity exceed the rate.
        CHECK(point.rate >= point.fidelity - 1e-9);
    }

    // The curve is convex: chord slopes dR/dG are nondecreasing in s.
    double previous_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < curve.size(); ++k) {
        const double dg = curve[k].fidelity - curve[k - 1].fidelity;
        if (dg <= 1e-9) continue;
        const double slope = (curve[k].rate - curve[k - 1].rate) / dg;
        CHECK(slope >= previous_slope - 1e-6);
        previous_slope = slope;
    }
}

TEST_CASE("zero-mass source events are carried through") {
    const Distribution source({0.5, 0.0, 0.5});
    const PayoffMatrix payoff{
        Matrix::from_rows({{1.0, -1.0}, {0.3, 0.3}, {-1.0, 1.0}})};
    const RateFidelityPoint point = seminfo::solve_rate_fidelity_point(source, payoff, 1.5);
    CHECK(point.converged);
    REQUIRE(point.channel.rows() == 3);
    CHECK(point.channel(1, 0) == 0.0);
    CHECK(point.channel(1, 1) == 0.0);
    REQUIRE(point.multipliers.size() == 3);
    for (double m : point.multipliers) CHECK(std::isfinite(m));
    double mass = 0.0;
    for (double q : point.output) mass += q;
    check_close(mass, 1.0, 1e-9);

    // Rates and fidelities match the reduced two-event problem.
    const Distribution reduced_source({0.5, 0.5});
    const PayoffMatrix reduced_payoff{Matrix::from_rows({{1.0, -1.0}, {-1.0, 1.0}})};
    const RateFidelityPoint reduced =
        seminfo::solve_rate_fidelity_point(reduced_source, reduced_payoff, 1.5);
    check_close(point.rate, reduced.rate, 1e-10);
    check_close(point.fidelity, reduced.fidelity, 1e-10);
}

TEST_CASE("matching point on a scaled discrimination instance") {
    const auto [alphabet, source] = seminfo::gray_level_source(3);
    const double width = seminfo::width_for_depth(3, 2.0);
    const SemanticChannel semantics = seminfo::discrimination_semantics(alphabet, width);
    const PayoffMatrix payoff = seminfo::payoff_from_semantics(source, semantics);

    const std::vector<double> probe = {0.5, 0.8, 1.0, 1.2, 1.5};
    const auto curve = seminfo::sweep_rate_fidelity(source, payoff, probe);
    const seminfo::MatchingPoint match =
        seminfo::find_matching_point(source, payoff, curve);
    CHECK(match.point.converged);
    check_close(match.s, 1.0, 1e-3);
    check_close(match.point.rate, match.point.fidelity, 1e-6);

    // Validation paths.
    expect_error(ErrorKind::validation, "at least two points",
                 [&] { (void)seminfo::find_matching_point(source, payoff, {curve.front()}); });
    std::vector<RateFidelityPoint> disordered = {curve[1], curve[0]};
    expect_error(ErrorKind::validation, "strictly increasing slopes",
                 [&] { (void)seminfo::find_matching_point(source, payoff, disordered); });

    // A sweep that stops short of the crossing cannot be refined.
    const auto low = seminfo::sweep_rate_fidelity(source, payoff, {0.05, 0.1, 0.2});
    expect_error(ErrorKind::validation, "matching point outside sweep",
                 [&] { (void)seminfo::find_matching_point(source, payoff, low); });
}

TEST_CASE("brute-force reference bound") {
    const Distribution fair({0.5, 0.5});

    // Every channel reaches fidelity zero on a zero payoff; the best rate is 0.
    const PayoffMatrix zero{Matrix(2, 2, 0.0)};
    check_close(seminfo::brute_force_rate_at_fidelity(fair, zero, 0.0, 4), 0.0, 1e-12);

    // The binary Hamming point D = 0.25 lies exactly on the resolution-100
    // grid, so the brute force recovers 1 - h2(0.25).
    const PayoffMatrix neg_hamming{Matrix::from_rows({{0.0, -1.0}, {-1.0, 0.0}})};
    check_close(seminfo::brute_force_rate_at_fidelity(fair, neg_hamming, -0.25, 100),
                1.0 - binary_entropy(0.25), 1e-9);

    expect_error(ErrorKind::validation, "resolution must be at least 1", [&] {
        (void)seminfo::brute_force_rate_at_fidelity(fair, zero, 0.0, 0);
    });
    const PayoffMatrix bleak{Matrix::from_rows({{-1.0, -1.0}, {-1.0, -1.0}})};
    expect_error(ErrorKind::validation, "infeasible fidelity target", [&] {
        (void)seminfo::brute_force_rate_at_fidelity(fair, bleak, 0.5, 4);
    });
    const Distribution four({0.25, 0.25, 0.25, 0.25});
    const PayoffMatrix wide{Matrix(4, 3, 0.0)};
    expect_error(ErrorKind::validation, "instance too large", [&] {
        (void)seminfo::brute_force_rate_at_fidelity(four, wide, 0.0, 25);
    });
}

TEST_CASE("fidelity and distortion solvers agree on an affinely related pair") {
    // Circular source: distortion is squared circular distance, semantics are
    // the matching Gaussians, so payoff = -alpha * distortion + constant.
    const std::size_t n = 8;
    const Distribution uniform = Distribution::normalized(std::vector<double>(n, 1.0));
    Matrix d(n, n);
    std::vector<TruthFunction> truths;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> degrees(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double gap = std::min<double>(i > j ? i - j : j - i,
                                                n - (i > j ? i - j : j - i));
            d(i, j) = gap * gap;
            degrees[i] = std::exp(-gap * gap / 2.0);
        }
        truths.emplace_back(std::move(degrees));
    }
    const PayoffMatrix payoff =
        seminfo::payoff_from_semantics(uniform, SemanticChannel(truths));
    const double alpha = 1.0 / (2.0 * std::log(2.0));
    const double offset = payoff.values(0, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            check_close(payoff.values(i, j), -alpha * d(i, j) + offset, 1e-12);

    const DistortionMatrix distortion{d};
    for (double s : {0.25, 0.5, 1.0, 2.0}) {
        const RateFidelityPoint f = seminfo::solve_rate_fidelity_point(uniform, payoff, s);
        const auto dist = seminfo::sweep_rate_distortion(uniform, distortion, {s * alpha});
        REQUIRE(dist.size() == 1);
        CHECK(f.converged);
        CHECK(dist.front().converged);
        check_close(f.rate, dist.front().rate, 1e-9);
        check_close(f.fidelity, -alpha * dist.front().distortion + offset, 1e-9);
    }
}

TEST_SUITE_END();
