#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "seminfo/prob.hpp"

namespace seminfo {

// Default floor used when truth degrees enter a logarithm inside an averaged
// quantity. Pointwise information values are never clamped.
inline constexpr double default_degree_floor = 1e-9;

struct GaussianDescriptor {
    double center = 0.0;
    double width = 1.0;  // strictly positive
};

// A fuzzy-set membership function over an alphabet: one degree in [0, 1] per
// event, at least one degree positive. When constructed from a Gaussian
// descriptor the descriptor is retained so closed-form expressions stay
// available.
class TruthFunction {
public:
    explicit TruthFunction(std::vector<double> degrees,
                           std::optional<GaussianDescriptor> gaussian = std::nullopt);

    std::size_t size() const noexcept { return degrees_.size(); }
    double operator[](std::size_t i) const { return degrees_[i]; }
    const std::vector<double>& degrees() const noexcept { return degrees_; }

    bool is_gaussian() const noexcept { return gaussian_.has_value(); }
    const GaussianDescriptor& gaussian() const;

private:
    std::vector<double> degrees_;
    std::optional<GaussianDescriptor> gaussian_;
};

// One truth function per message, all over the same alphabet.
class SemanticChannel {
public:
    explicit SemanticChannel(std::vector<TruthFunction> messages);

    std::size_t message_count() const noexcept { return messages_.size(); }
    std::size_t event_count() const noexcept { return messages_.front().size(); }
    const TruthFunction& message(std::size_t j) const { return messages_[j]; }

private:
    std::vector<TruthFunction> messages_;
};

// Clamp a degree into [floor, 1].
double clamp_degree(double degree, double floor = default_degree_floor);

// Discretized Gaussian membership exp(-(v - center)^2 / (2 width^2)) over the
// alphabet's numeric values. Requires width > 0 and a numeric alphabet.
TruthFunction gaussian_truth(const Alphabet& alphabet, double center, double width);

// Logical probability: the prior expectation of the (unclamped) truth degrees.
double logical_probability(const Distribution& prior, const TruthFunction& truth);

// Posterior P(x | message accepted) by Bayes over the truth degrees.
Distribution semantic_posterior(const Distribution& prior, const TruthFunction& truth);

// Pointwise generalized information log2(degree / logical probability), in
// bits. Unclamped: a zero degree yields -infinity.
double semantic_information(const Distribution& prior, const TruthFunction& truth,
                            std::size_t event_index);

// Closed form of the same quantity for Gaussian truth functions:
// log2(1 / Q) - (v - center)^2 / (2 width^2 ln 2). Requires the truth function
// to carry a Gaussian descriptor.
double semantic_information_gaussian(const Alphabet& alphabet, const Distribution& prior,
                                     const TruthFunction& truth, std::size_t event_index);

// Evidence-weighted information sum_i evidence_i log2(degree_i / Q), the
// generalized Kullback criterion. Degrees are clamped before the logarithm.
double generalized_kullback_score(const Distribution& evidence, const Distribution& prior,
                                  const TruthFunction& truth,
                                  double degree_floor = default_degree_floor);

// -sum_i evidence_i log2(posterior_i), with the posterior computed from
// clamped degrees.
double generalized_conditional_entropy(const Distribution& evidence, const Distribution& prior,
                                       const TruthFunction& truth,
                                       double degree_floor = default_degree_floor);

struct SelectionResult {
    std::size_t index = 0;           // chosen candidate (lowest index on ties)
    std::vector<double> scores;      // kullback score per candidate
};

// Pick the candidate message that maximizes the generalized Kullback score
// under the given evidence. Candidates whose raw logical probability is zero
// are inadmissible; if all are, the call fails.
SelectionResult select_best_message(const SemanticChannel& candidates,
                                    const Distribution& evidence, const Distribution& prior,
                                    double degree_floor = default_degree_floor);

// Translation selection: use the posterior induced by a source message as the
// evidence, then select among the candidate messages.
SelectionResult select_translation(const TruthFunction& source_message,
                                   const Distribution& prior,
                                   const SemanticChannel& candidates,
                                   double degree_floor = default_degree_floor);

}  // namespace seminfo
