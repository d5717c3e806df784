#include "seminfo/semantic.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace seminfo {

TruthFunction::TruthFunction(std::vector<double> degrees,
                             std::optional<GaussianDescriptor> gaussian)
    : degrees_(std::move(degrees)), gaussian_(gaussian) {
    if (degrees_.empty()) throw_validation("truth function must contain at least one degree");
    bool any_positive = false;
    for (double d : degrees_) {
        if (!(d >= 0.0 && d <= 1.0))
            throw_validation("truth degrees must lie in [0, 1]");
        any_positive = any_positive || d > 0.0;
    }
    if (!any_positive)
        throw_validation("truth function must have at least one positive degree");
    if (gaussian_ && !(gaussian_->width > 0.0))
        throw_validation("invalid width: truth-function width must be positive");
}

const GaussianDescriptor& TruthFunction::gaussian() const {
    if (!gaussian_)
        throw_validation("closed form unavailable: truth function has no Gaussian descriptor");
    return *gaussian_;
}

SemanticChannel::SemanticChannel(std::vector<TruthFunction> messages)
    : messages_(std::move(messages)) {
    if (messages_.empty())
        throw_validation("semantic channel must contain at least one message");
    const std::size_t width = messages_.front().size();
    for (const auto& m : messages_) {
        if (m.size() != width)
            throw_validation("semantic channel messages must share one alphabet");
    }
}

double clamp_degree(double degree, double floor) {
    if (!(floor > 0.0 && floor <= 1.0))
        throw_validation("degree floor must lie in (0, 1]");
    if (degree < floor) return floor;
    if (degree > 1.0) return 1.0;
    return degree;
}

TruthFunction gaussian_truth(const Alphabet& alphabet, double center, double width) {
    if (!(width > 0.0)) throw_validation("invalid width: width must be positive");
    const auto& values = alphabet.values();
    std::vector<double> degrees;
    degrees.reserve(values.size());
    const double denom = 2.0 * width * width;
    for (double v : values) {
        const double diff = v - center;
        degrees.push_back(std::exp(-diff * diff / denom));
    }
    return TruthFunction(std::move(degrees), GaussianDescriptor{center, width});
}

namespace {

void check_sizes(const Distribution& prior, const TruthFunction& truth) {
    if (prior.size() != truth.size())
        throw_validation("prior and truth function must share one alphabet");
}

}  // namespace

double logical_probability(const Distribution& prior, const TruthFunction& truth) {
    check_sizes(prior, truth);
    double q = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) q += prior[i] * truth[i];
    if (!(q > 0.0))
        throw_validation("null logical probability: message is impossible under the prior");
    return q;
}

Distribution semantic_posterior(const Distribution& prior, const TruthFunction& truth) {
    check_sizes(prior, truth);
    std::vector<double> weights(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i) weights[i] = prior[i] * truth[i];
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (!(sum > 0.0))
        throw_validation("null logical probability: message is impossible under the prior");
    return Distribution::normalized(std::move(weights));
}

double semantic_information(const Distribution& prior, const TruthFunction& truth,
                            std::size_t event_index) {
    check_sizes(prior, truth);
    if (event_index >= truth.size())
        throw_validation("event index out of range");
    const double q = logical_probability(prior, truth);
    const double degree = truth[event_index];
    if (degree == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log2(degree / q);
}

double semantic_information_gaussian(const Alphabet& alphabet, const Distribution& prior,
                                     const TruthFunction& truth, std::size_t event_index) {
    check_sizes(prior, truth);
    if (alphabet.size() != truth.size())
        throw_validation("alphabet and truth function must have the same size");
    if (event_index >= truth.size())
        throw_validation("event index out of range");
    const GaussianDescriptor& g = truth.gaussian();
    const double q = logical_probability(prior, truth);
    const double diff = alphabet.values()[event_index] - g.center;
    constexpr double ln2 = 0.6931471805599453094;
    return -std::log2(q) - diff * diff / (2.0 * g.width * g.width * ln2);
}

namespace {

// Clamped degrees and the logical probability computed from them. Every
// averaged quantity below uses this shared view so that decompositions cancel
// exactly.
struct ClampedView {
    std::vector<double> degrees;
    double logical_q = 0.0;
};

ClampedView clamp_view(const Distribution& prior, const TruthFunction& truth, double floor) {
    ClampedView view;
    view.degrees.resize(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        view.degrees[i] = clamp_degree(truth[i], floor);
        view.logical_q += prior[i] * view.degrees[i];
    }
    return view;
}

}  // namespace

double generalized_kullback_score(const Distribution& evidence, const Distribution& prior,
                                  const TruthFunction& truth, double degree_floor) {
    check_sizes(prior, truth);
    if (evidence.size() != prior.size())
        throw_validation("evidence and prior must share one alphabet");
    const ClampedView view = clamp_view(prior, truth, degree_floor);
    double score = 0.0;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
        if (evidence[i] == 0.0) continue;
        score += evidence[i] * std::log2(view.degrees[i] / view.logical_q);
    }
    return score;
}

double generalized_conditional_entropy(const Distribution& evidence, const Distribution& prior,
                                       const TruthFunction& truth, double degree_floor) {
    check_sizes(prior, truth);
    if (evidence.size() != prior.size())
        throw_validation("evidence and prior must share one alphabet");
    const ClampedView view = clamp_view(prior, truth, degree_floor);
    double h = 0.0;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
        if (evidence[i] == 0.0) continue;
        const double posterior = view.degrees[i] * prior[i] / view.logical_q;
        h -= evidence[i] * std::log2(posterior);
    }
    return h;
}

SelectionResult select_best_message(const SemanticChannel& candidates,
                                    const Distribution& evidence, const Distribution& prior,
                                    double degree_floor) {
    if (candidates.event_count() != prior.size())
        throw_validation("candidates and prior must share one alphabet");
    SelectionResult result;
    result.scores.reserve(candidates.message_count());
    bool any_admissible = false;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.message_count(); ++j) {
        const TruthFunction& truth = candidates.message(j);
        double raw_q = 0.0;
        for (std::size_t i = 0; i < prior.size(); ++i) raw_q += prior[i] * truth[i];
        double score;
        if (raw_q > 0.0) {
            score = generalized_kullback_score(evidence, prior, truth, degree_floor);
            if (!any_admissible || score > best) {
                best = score;
                result.index = j;
            }
            any_admissible = true;
        } else {
            // Impossible under the prior: record a sentinel, never select it.
            score = -std::numeric_limits<double>::infinity();
        }
        result.scores.push_back(score);
    }
    if (!any_admissible)
        throw_validation(
            "no admissible candidate: every candidate has null logical probability");
    return result;
}

SelectionResult select_translation(const TruthFunction& source_message,
                                   const Distribution& prior, const SemanticChannel& candidates,
                                   double degree_floor) {
    const Distribution evidence = semantic_posterior(prior, source_message);
    return select_best_message(candidates, evidence, prior, degree_floor);
}

}  // namespace seminfo
