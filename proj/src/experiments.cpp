#include "seminfo/experiments.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace seminfo {

std::pair<Alphabet, Distribution> gray_level_source(int bits) {
    if (bits < 1 || bits > 16)
        throw_validation("bit depth must be between 1 and 16");
    const int top = (1 << bits) - 1;
    Alphabet alphabet = Alphabet::linspace(0.0, 1.0, static_cast<std::size_t>(top) + 1);
    // Bell-shaped prior over the level range: discretized Gaussian centered on
    // the mid level with sigma = range / 8.
    const double center = static_cast<double>(top) / 2.0;
    const double sigma = static_cast<double>(top) / 8.0;
    std::vector<double> weights(static_cast<std::size_t>(top) + 1);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double diff = static_cast<double>(i) - center;
        weights[i] = std::exp(-diff * diff / (2.0 * sigma * sigma));
    }
    return {std::move(alphabet), Distribution::normalized(std::move(weights))};
}

SemanticChannel discrimination_semantics(const Alphabet& alphabet, double width) {
    if (!(width > 0.0)) throw_validation("invalid width: width must be positive");
    std::vector<TruthFunction> messages;
    messages.reserve(alphabet.size());
    for (double center : alphabet.values())
        messages.push_back(gaussian_truth(alphabet, center, width));
    return SemanticChannel(std::move(messages));
}

double width_for_depth(int bits, double width, int reference_bits) {
    if (bits < 1 || bits > 16 || reference_bits < 1 || reference_bits > 16)
        throw_validation("bit depth must be between 1 and 16");
    if (!(width > 0.0)) throw_validation("invalid width: width must be positive");
    const double range = static_cast<double>((1 << bits) - 1);
    const double reference_range = static_cast<double>((1 << reference_bits) - 1);
    return width * range / reference_range;
}

CurveFamilyResult rate_fidelity_family(const CurveFamilyConfig& config) {
    if (config.widths.empty())
        throw_validation("curve family requires at least one width");
    auto [alphabet, source] = gray_level_source(config.bits);
    CurveFamilyResult result;
    result.bits = config.bits;
    result.widths = config.widths;
    result.curves.reserve(config.widths.size());
    for (double width : config.widths) {
        const PayoffMatrix payoff =
            payoff_from_semantics(source, discrimination_semantics(alphabet, width));
        result.curves.push_back(sweep_rate_fidelity(source, payoff, config.s_grid, config.solve));
    }
    return result;
}

MatchingStudyPoint matching_point_for_depth(int bits, double width, const SolveOptions& solve,
                                            double slope_tolerance) {
    auto [alphabet, source] = gray_level_source(bits);
    const double scaled = width_for_depth(bits, width);
    const PayoffMatrix payoff =
        payoff_from_semantics(source, discrimination_semantics(alphabet, scaled));
    const std::vector<double> probe_grid = {0.5, 0.8, 1.0, 1.2, 1.5};
    const std::vector<RateFidelityPoint> curve =
        sweep_rate_fidelity(source, payoff, probe_grid, solve);
    MatchingOptions opts;
    opts.solve = solve;
    opts.slope_tolerance = slope_tolerance;
    const MatchingPoint match = find_matching_point(source, payoff, curve, opts);
    MatchingStudyPoint pt;
    pt.bits = bits;
    pt.matched_fidelity = match.point.fidelity;
    pt.slope = match.s;
    pt.converged = match.point.converged;
    return pt;
}

DepthStudyResult depth_saturation_study(const DepthStudyConfig& config) {
    if (config.min_bits < 1 || config.max_bits > 16 || config.min_bits > config.max_bits)
        throw_validation("bit depth range must satisfy 1 <= min <= max <= 16");
    if (!(config.plateau_tolerance > 0.0))
        throw_validation("plateau tolerance must be positive");
    DepthStudyResult result;
    result.width = config.width;
    for (int k = config.min_bits; k <= config.max_bits; ++k)
        result.points.push_back(
            matching_point_for_depth(k, config.width, config.solve, config.slope_tolerance));

    // Saturation depth: the smallest depth after which the matched fidelity
    // never rises by more than the plateau tolerance. Small decreases past the
    // saturation knee are allowed (the criterion is one-sided).
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < result.points.size(); ++i)
        diffs.push_back(result.points[i + 1].matched_fidelity -
                        result.points[i].matched_fidelity);
    std::size_t t = diffs.size();
    while (t > 0 && diffs[t - 1] <= config.plateau_tolerance) --t;
    result.saturation_bits = config.min_bits + static_cast<int>(t);
    return result;
}

ForecastStudyResult forecast_information_study(const ForecastStudyConfig& config) {
    if (!(config.prior_width > 0.0))
        throw_validation("invalid width: prior width must be positive");
    if (!(config.grid_step > 0.0)) throw_validation("grid step must be positive");
    if (config.grid_size < 2) throw_validation("grid must contain at least two values");
    if (config.forecasts.empty())
        throw_validation("forecast study requires at least one forecast");

    Alphabet alphabet = Alphabet::linspace(config.grid_start, config.grid_step, config.grid_size);
    std::vector<double> weights(config.grid_size);
    for (std::size_t i = 0; i < config.grid_size; ++i) {
        const double diff = alphabet.values()[i] - config.prior_center;
        weights[i] = std::exp(-diff * diff / (2.0 * config.prior_width * config.prior_width));
    }
    Distribution prior = Distribution::normalized(std::move(weights));

    ForecastStudyResult result{std::move(alphabet), std::move(prior), {}};
    for (const ForecastSpec& spec : config.forecasts) {
        TruthFunction truth = spec.flat
                                  ? TruthFunction(std::vector<double>(config.grid_size, 1.0))
                                  : gaussian_truth(result.alphabet, spec.center, spec.width);
        ForecastCurve curve{spec, {}};
        curve.info_bits.reserve(config.grid_size);
        for (std::size_t i = 0; i < config.grid_size; ++i)
            curve.info_bits.push_back(semantic_information(result.prior, truth, i));
        result.curves.push_back(std::move(curve));
    }
    return result;
}

}  // namespace seminfo
