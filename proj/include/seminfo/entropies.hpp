#pragma once

#include "seminfo/prob.hpp"
#include "seminfo/semantic.hpp"

namespace seminfo {

// A complete forecasting setup: a true source distribution P, a forecast
// distribution Q over the same events, a classical channel P(y_j | x_i), and a
// semantic channel assigning each output message y_j a truth function.
//
// All entropy-style aggregates below clamp truth degrees once, up front, and
// derive every logical probability and posterior from the clamped degrees.
// Keeping a single clamped view is what makes the decomposition
//   [H(X) - H(X|Y)] - [H_Q(X) - H_Q(X|Y)] = KL(P || Q)
// hold exactly rather than up to O(floor) residue.
struct SemanticSystem {
    Distribution source;        // P(x)
    Distribution forecast;      // Q(x); must be positive wherever P(x) > 0
    Channel channel;            // P(y | x)
    SemanticChannel semantics;  // truth function per output message
    double degree_floor = default_degree_floor;

    SemanticSystem(Distribution source_in, Distribution forecast_in, Channel channel_in,
                   SemanticChannel semantics_in, double degree_floor_in = default_degree_floor);
};

// -sum_i P(x_i) log2 Q(x_i): code length of the prior forecast.
double forecasting_entropy(const SemanticSystem& system);

// -sum_ij P(x_i) P(y_j|x_i) log2 Q(x_i|y_j): code length after updating the
// forecast on each received message.
double posterior_forecasting_entropy(const SemanticSystem& system);

// -sum_j P(y_j) log2 Q(y_j): output entropy against the messages' logical
// probabilities.
double generalized_output_entropy(const SemanticSystem& system);

// -sum_ij P(x_i) P(y_j|x_i) log2 degree_j(x_i): output uncertainty left by the
// fuzzy memberships themselves.
double fuzzy_conditional_entropy(const SemanticSystem& system);

// sum_ij P(x_i) P(y_j|x_i) log2( Q(x_i|y_j) / Q(x_i) ): the generalized mutual
// information. Never exceeds the classical mutual information of (source,
// channel); equal when the forecast posterior matches the true posterior.
double generalized_mutual_information(const SemanticSystem& system);

}  // namespace seminfo
