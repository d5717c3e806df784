#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "seminfo/errors.hpp"
#include "seminfo/matrix.hpp"

namespace seminfo {

// A finite event alphabet. Labels are unique; numeric values are optional and
// only required by operations that need a metric on the events (e.g. the
// Gaussian truth-function constructors).
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> labels,
                      std::optional<std::vector<double>> values = std::nullopt);

    // Convenience: labels "0", "1", ... with values 0.0, 1.0, ...
    static Alphabet indexed(std::size_t n);

    // Evenly spaced numeric alphabet [start, start + step, ...], n points.
    static Alphabet linspace(double start, double step, std::size_t n);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    bool has_values() const noexcept { return values_.has_value(); }
    const std::vector<double>& values() const;

private:
    std::vector<std::string> labels_;
    std::optional<std::vector<double>> values_;
};

// A probability distribution over a finite alphabet. The constructor accepts
// entries that are nonnegative and sum to 1 within 1e-9, then renormalizes so
// the stored entries sum to exactly 1 in floating point.
class Distribution {
public:
    explicit Distribution(std::vector<double> probabilities);

    // Build from arbitrary nonnegative weights by renormalizing. Rejects
    // negative entries and all-zero weight vectors.
    static Distribution normalized(std::vector<double> weights);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probabilities() const noexcept { return p_; }

    bool operator==(const Distribution& other) const = default;

private:
    Distribution() = default;
    std::vector<double> p_;
};

// A conditional distribution P(y|x): one output distribution per input event.
class Channel {
public:
    explicit Channel(std::vector<Distribution> rows);

    static Channel from_matrix(const Matrix& m);

    std::size_t input_count() const noexcept { return rows_.size(); }
    std::size_t output_count() const noexcept { return rows_.front().size(); }
    const Distribution& row(std::size_t i) const { return rows_[i]; }
    double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }

    Matrix as_matrix() const;

    // Output marginal sum_i P(x_i) P(y|x_i).
    Distribution marginal(const Distribution& source) const;

private:
    std::vector<Distribution> rows_;
};

// --- Classical (Shannon) quantities, all in bits ---------------------------

// log2(posterior / prior) for one event. Returns -infinity when the posterior
// is zero but the prior is positive; rejects prior <= 0.
double shannon_information(double prior, double posterior);

// H(p) = -sum p_i log2 p_i, with 0 log 0 = 0.
double shannon_entropy(const Distribution& p);

// KL(p || q) in bits. Requires q_i > 0 wherever p_i > 0.
double kl_divergence_bits(const Distribution& p, const Distribution& q);

// I(X;Y) for a source and channel, in bits.
double shannon_mutual_information(const Distribution& source, const Channel& channel);

}  // namespace seminfo
