#pragma once

#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/errors.hpp"
#include "seminfo/prob.hpp"

namespace testutil {

inline void check_close(double actual, double expected, double tol) {
    CHECK_MESSAGE(std::abs(actual - expected) <= tol,
                  "actual=" << actual << " expected=" << expected << " tol=" << tol);
}

// Run fn and require it to throw a seminfo::Error of the given kind whose
// message contains the fragment.
template <typename F>
void expect_error(seminfo::ErrorKind kind, const std::string& fragment, F&& fn) {
    try {
        fn();
        FAIL_CHECK("expected an error containing '" << fragment << "', none was thrown");
    } catch (const seminfo::Error& e) {
        CHECK(e.kind() == kind);
        CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos,
                      "error message '" << e.what() << "' does not contain '" << fragment << "'");
    }
}

inline seminfo::Distribution random_distribution(std::mt19937& rng, std::size_t n,
                                                 double min_weight = 0.0) {
    std::uniform_real_distribution<double> u(min_weight, 1.0);
    std::vector<double> weights(n);
    for (double& w : weights) w = u(rng);
    return seminfo::Distribution::normalized(std::move(weights));
}

inline seminfo::Channel random_channel(std::mt19937& rng, std::size_t inputs,
                                       std::size_t outputs, double min_weight = 0.0) {
    std::vector<seminfo::Distribution> rows;
    rows.reserve(inputs);
    for (std::size_t i = 0; i < inputs; ++i)
        rows.push_back(random_distribution(rng, outputs, min_weight));
    return seminfo::Channel(std::move(rows));
}

// Random truth degrees in [0, 1]; with zero_share > 0 some degrees are exact
// zeros (to exercise the clamping paths). Always at least one positive degree.
inline std::vector<double> random_degrees(std::mt19937& rng, std::size_t n,
                                          double zero_share = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> degrees(n);
    bool any_positive = false;
    for (double& d : degrees) {
        d = u(rng) < zero_share ? 0.0 : u(rng);
        any_positive = any_positive || d > 0.0;
    }
    if (!any_positive) degrees[0] = 0.5;
    return degrees;
}

}  // namespace testutil
