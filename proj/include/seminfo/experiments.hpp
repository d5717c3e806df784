#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "seminfo/prob.hpp"
#include "seminfo/rate_fidelity.hpp"
#include "seminfo/semantic.hpp"

namespace seminfo {

// --- Gray-level source and discrimination semantics -------------------------

// Alphabet {0, ..., 2^k - 1} of k-bit gray levels with a binomial-shaped
// prior: the distribution of a symmetric random walk folded onto the level
// range (discretized bell centered on the mid level). k must be in [1, 16].
std::pair<Alphabet, Distribution> gray_level_source(int bits);

// One Gaussian reading-discrimination truth function per level, centered on
// that level with common width. Requires width > 0.
SemanticChannel discrimination_semantics(const Alphabet& alphabet, double width);

// Width used by the depth studies: `width` is expressed in units of the
// reference 6-bit level range, so sigma/width stays constant across depths.
double width_for_depth(int bits, double width, int reference_bits = 6);

// --- Rate-fidelity curve family (one curve per discrimination width) -------

struct CurveFamilyConfig {
    int bits = 6;
    std::vector<double> widths;  // one curve per width
    std::vector<double> s_grid;
    SolveOptions solve;
};

struct CurveFamilyResult {
    int bits = 6;
    std::vector<double> widths;
    std::vector<std::vector<RateFidelityPoint>> curves;  // parallel to widths
};

CurveFamilyResult rate_fidelity_family(const CurveFamilyConfig& config);

// --- Depth-saturation study (matching fidelity vs. quantization depth) -----

struct MatchingStudyPoint {
    int bits = 0;
    double matched_fidelity = 0.0;  // G at the matching point R(G) = G
    double slope = 0.0;             // matching slope s*
    bool converged = true;
};

struct DepthStudyResult {
    double width = 0.0;
    std::vector<MatchingStudyPoint> points;  // one per depth k_min..k_max
    int saturation_bits = 0;                 // smallest depth after which the
                                             // matched fidelity stops rising
};

struct DepthStudyConfig {
    double width = 2.0;
    int min_bits = 1;
    int max_bits = 8;
    SolveOptions solve;
    double slope_tolerance = 1e-4;
    double plateau_tolerance = 1e-3;  // rise below this counts as saturated
};

// Matching point for one (depth, width) pair, sweeping slopes internally.
MatchingStudyPoint matching_point_for_depth(int bits, double width,
                                            const SolveOptions& solve = {},
                                            double slope_tolerance = 1e-4);

DepthStudyResult depth_saturation_study(const DepthStudyConfig& config);

// --- Stock-forecast information curves --------------------------------------

struct ForecastSpec {
    bool flat = false;     // constant membership (tautology-like forecast)
    double center = 0.0;   // ignored when flat
    double width = 1.0;    // ignored when flat
};

struct ForecastStudyConfig {
    double prior_center = 100.0;
    double prior_width = 10.0;
    double grid_start = 70.0;
    double grid_step = 1.0;
    std::size_t grid_size = 61;
    std::vector<ForecastSpec> forecasts;
};

struct ForecastCurve {
    ForecastSpec spec;
    std::vector<double> info_bits;  // info at each grid value, may be -inf
};

struct ForecastStudyResult {
    Alphabet alphabet;
    Distribution prior;
    std::vector<ForecastCurve> curves;
};

// Pointwise information carried by each candidate forecast at every outcome
// value, against a discretized Gaussian prior. Values are unclamped.
ForecastStudyResult forecast_information_study(const ForecastStudyConfig& config);

}  // namespace seminfo
