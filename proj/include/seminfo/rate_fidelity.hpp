#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "seminfo/matrix.hpp"
#include "seminfo/prob.hpp"
#include "seminfo/semantic.hpp"

namespace seminfo {

// Per-pair fidelity payoff I(x_i ; y_j) in bits. Entries must be finite;
// positive entries reward a pairing, negative entries penalize it.
struct PayoffMatrix {
    Matrix values;  // events x messages

    explicit PayoffMatrix(Matrix values_in);
    std::size_t events() const noexcept { return values.rows(); }
    std::size_t messages() const noexcept { return values.cols(); }
};

// Classical nonnegative distortion d(x_i, y_j).
struct DistortionMatrix {
    Matrix values;

    explicit DistortionMatrix(Matrix values_in);
};

// Payoff I_ij = log2( clamp(degree_j(x_i)) / Q_clamped(y_j) ) built from a
// prior and a semantic channel. This is the fidelity criterion whose
// constrained-rate curve the solver traces.
PayoffMatrix payoff_from_semantics(const Distribution& prior, const SemanticChannel& semantics,
                                   double degree_floor = default_degree_floor);

// sum_ij P(x_i) P(y_j|x_i) d(x_i, y_j).
double average_distortion(const Distribution& source, const Channel& channel,
                          const DistortionMatrix& distortion);

struct SolveOptions {
    double tolerance = 1e-10;    // target on the KKT residual
    int max_iterations = 20000;  // total iteration budget across all phases
    // Optional starting output distribution (one weight per message); used by
    // sweeps to warm-start consecutive slopes.
    std::optional<std::vector<double>> warm_start;
};

// One point of the rate-fidelity curve R(G) at slope parameter s.
struct RateFidelityPoint {
    double s = 0.0;
    double rate = 0.0;      // R in bits (>= 0)
    double fidelity = 0.0;  // G in bits (may be negative)
    // Optimal test channel rows P(y_j | x_i). Rows for zero-mass source events
    // are all-zero placeholders, so this is a Matrix rather than a Channel.
    Matrix channel;
    std::vector<double> output;       // output marginal; entries < 1e-14 reported as 0
    std::vector<double> multipliers;  // per-event dual multipliers lambda_i
    int iterations = 0;
    bool converged = false;
};

struct RateDistortionPoint {
    double s = 0.0;
    double rate = 0.0;
    double distortion = 0.0;
    Matrix channel;
    std::vector<double> output;
    int iterations = 0;
    bool converged = false;
};

// Solve min I(X;Y) - s G over channels at slope s >= 0 by alternating
// minimization on the output distribution with a Newton-accelerated
// finishing phase. s = 0 is handled analytically.
RateFidelityPoint solve_rate_fidelity_point(const Distribution& source,
                                            const PayoffMatrix& payoff, double s,
                                            const SolveOptions& options = {});

// Sweep a strictly increasing grid of nonnegative slopes, warm-starting each
// solve from the previous one.
std::vector<RateFidelityPoint> sweep_rate_fidelity(const Distribution& source,
                                                   const PayoffMatrix& payoff,
                                                   const std::vector<double>& s_grid,
                                                   const SolveOptions& options = {});

// Classical rate-distortion sweep, implemented as the fidelity solver on
// payoff = -distortion with D = -G.
std::vector<RateDistortionPoint> sweep_rate_distortion(const Distribution& source,
                                                       const DistortionMatrix& distortion,
                                                       const std::vector<double>& s_grid,
                                                       const SolveOptions& options = {});

struct MatchingPoint {
    double s = 0.0;  // slope at which R(G) = G
    RateFidelityPoint point;
};

struct MatchingOptions {
    SolveOptions solve;
    double slope_tolerance = 1e-4;  // bisection width on s
};

// Locate the matching point R(G) = G on a solved curve by slope bisection,
// refining between adjacent grid slopes. The curve must come from
// sweep_rate_fidelity on the same source and payoff.
MatchingPoint find_matching_point(const Distribution& source, const PayoffMatrix& payoff,
                                  const std::vector<RateFidelityPoint>& curve,
                                  const MatchingOptions& options = {});

// Reference bound: enumerate channels whose rows live on the simplex grid
// with the given resolution and return the smallest mutual information among
// those achieving fidelity >= g_target. Accuracy is O(1/resolution); only
// meant for small instances.
double brute_force_rate_at_fidelity(const Distribution& source, const PayoffMatrix& payoff,
                                    double g_target, int resolution);

}  // namespace seminfo
