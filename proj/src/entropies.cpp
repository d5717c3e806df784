#include "seminfo/entropies.hpp"

#include <cmath>
#include <vector>

namespace seminfo {

SemanticSystem::SemanticSystem(Distribution source_in, Distribution forecast_in,
                               Channel channel_in, SemanticChannel semantics_in,
                               double degree_floor_in)
    : source(std::move(source_in)),
      forecast(std::move(forecast_in)),
      channel(std::move(channel_in)),
      semantics(std::move(semantics_in)),
      degree_floor(degree_floor_in) {
    if (forecast.size() != source.size())
        throw_validation("forecast and source must share one alphabet");
    if (channel.input_count() != source.size())
        throw_validation("channel input count must match the source size");
    if (semantics.message_count() != channel.output_count())
        throw_validation("semantic channel must provide one truth function per output");
    if (semantics.event_count() != source.size())
        throw_validation("semantic channel must be defined over the source alphabet");
    if (!(degree_floor > 0.0 && degree_floor <= 1.0))
        throw_validation("degree floor must lie in (0, 1]");
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (source[i] > 0.0 && !(forecast[i] > 0.0))
            throw_validation(
                "absolute-continuity violation: forecast is zero on an event with positive mass");
    }
}

namespace {

// Shared clamped view of the semantic channel: degrees clamped once, logical
// probabilities computed from the clamped degrees. All aggregates read from
// here so their differences telescope exactly.
struct ClampedSemantics {
    std::vector<std::vector<double>> degrees;  // [message][event]
    std::vector<double> logical_q;             // per message, from clamped degrees
};

ClampedSemantics clamp_all(const SemanticSystem& system) {
    ClampedSemantics view;
    const std::size_t m = system.semantics.message_count();
    const std::size_t n = system.source.size();
    view.degrees.resize(m);
    view.logical_q.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        view.degrees[j].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = clamp_degree(system.semantics.message(j)[i], system.degree_floor);
            view.degrees[j][i] = d;
            view.logical_q[j] += system.source[i] * d;
        }
    }
    return view;
}

}  // namespace

double forecasting_entropy(const SemanticSystem& system) {
    double h = 0.0;
    for (std::size_t i = 0; i < system.source.size(); ++i) {
        if (system.source[i] == 0.0) continue;
        h -= system.source[i] * std::log2(system.forecast[i]);
    }
    return h;
}

double posterior_forecasting_entropy(const SemanticSystem& system) {
    const ClampedSemantics view = clamp_all(system);
    // Semantic posterior against the objective source:
    // Q(x_i | y_j) = degree_j(x_i) P(x_i) / Q(y_j), all from clamped degrees.
    double h = 0.0;
    for (std::size_t i = 0; i < system.source.size(); ++i) {
        const double p = system.source[i];
        if (p == 0.0) continue;
        for (std::size_t j = 0; j < system.semantics.message_count(); ++j) {
            const double w = system.channel(i, j);
            if (w == 0.0) continue;
            const double posterior = view.degrees[j][i] * p / view.logical_q[j];
            h -= p * w * std::log2(posterior);
        }
    }
    return h;
}

double generalized_output_entropy(const SemanticSystem& system) {
    const ClampedSemantics view = clamp_all(system);
    const Distribution out = system.channel.marginal(system.source);
    double h = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (out[j] == 0.0) continue;
        h -= out[j] * std::log2(view.logical_q[j]);
    }
    return h;
}

double fuzzy_conditional_entropy(const SemanticSystem& system) {
    const ClampedSemantics view = clamp_all(system);
    double h = 0.0;
    for (std::size_t i = 0; i < system.source.size(); ++i) {
        const double p = system.source[i];
        if (p == 0.0) continue;
        for (std::size_t j = 0; j < system.semantics.message_count(); ++j) {
            const double w = system.channel(i, j);
            if (w == 0.0) continue;
            h -= p * w * std::log2(view.degrees[j][i]);
        }
    }
    return h;
}

double generalized_mutual_information(const SemanticSystem& system) {
    const ClampedSemantics view = clamp_all(system);
    // Posterior against the objective source over the subjective forecast:
    // sum_ij P(x_i, y_j) log2( Q(x_i|y_j) / Q(x_i) ).
    double info = 0.0;
    for (std::size_t i = 0; i < system.source.size(); ++i) {
        const double p = system.source[i];
        if (p == 0.0) continue;
        for (std::size_t j = 0; j < system.semantics.message_count(); ++j) {
            const double w = system.channel(i, j);
            if (w == 0.0) continue;
            const double posterior = view.degrees[j][i] * p / view.logical_q[j];
            info += p * w * std::log2(posterior / system.forecast[i]);
        }
    }
    return info;
}

}  // namespace seminfo
