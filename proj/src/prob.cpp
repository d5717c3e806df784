#include "seminfo/prob.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

namespace seminfo {

namespace {

constexpr double sum_tolerance = 1e-9;

double checked_nonnegative(double value, const char* what) {
    if (!(value >= 0.0))  // catches negatives and NaN
        throw_validation(std::string("invalid weight: ") + what + " must be nonnegative");
    if (std::isinf(value))
        throw_validation(std::string("invalid weight: ") + what + " must be finite");
    return value;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> labels, std::optional<std::vector<double>> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
    if (labels_.empty()) throw_validation("alphabet must contain at least one event");
    std::unordered_set<std::string> seen;
    for (const auto& label : labels_) {
        if (!seen.insert(label).second)
            throw_validation("alphabet labels must be unique (duplicate '" + label + "')");
    }
    if (values_ && values_->size() != labels_.size())
        throw_validation("alphabet values must match the number of labels");
}

Alphabet Alphabet::indexed(std::size_t n) {
    if (n == 0) throw_validation("alphabet must contain at least one event");
    std::vector<std::string> labels;
    std::vector<double> values;
    labels.reserve(n);
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
        values.push_back(static_cast<double>(i));
    }
    return Alphabet(std::move(labels), std::move(values));
}

Alphabet Alphabet::linspace(double start, double step, std::size_t n) {
    if (n == 0) throw_validation("alphabet must contain at least one event");
    if (!(step > 0.0)) throw_validation("alphabet step must be positive");
    std::vector<std::string> labels;
    std::vector<double> values;
    labels.reserve(n);
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = start + step * static_cast<double>(i);
        values.push_back(v);
        // Integral grids get clean labels; fractional grids keep full precision.
        if (v == std::floor(v) && std::abs(v) < 1e15)
            labels.push_back(std::to_string(static_cast<long long>(v)));
        else
            labels.push_back(std::to_string(v));
    }
    return Alphabet(std::move(labels), std::move(values));
}

const std::vector<double>& Alphabet::values() const {
    if (!values_) throw_validation("alphabet has no numeric values");
    return *values_;
}

Distribution::Distribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
    if (p_.empty()) throw_validation("distribution must contain at least one entry");
    double sum = 0.0;
    for (double v : p_) sum += checked_nonnegative(v, "probability");
    if (std::abs(sum - 1.0) > sum_tolerance)
        throw_validation("distribution entries must sum to 1 (got " + std::to_string(sum) + ")");
    for (double& v : p_) v /= sum;
}

Distribution Distribution::normalized(std::vector<double> weights) {
    if (weights.empty()) throw_validation("distribution must contain at least one entry");
    double sum = 0.0;
    for (double v : weights) sum += checked_nonnegative(v, "weight");
    if (sum <= 0.0) throw_validation("degenerate weights: total weight must be positive");
    Distribution d;
    d.p_ = std::move(weights);
    for (double& v : d.p_) v /= sum;
    return d;
}

Channel::Channel(std::vector<Distribution> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw_validation("channel must contain at least one row");
    const std::size_t width = rows_.front().size();
    for (const auto& row : rows_) {
        if (row.size() != width)
            throw_validation("channel rows must all have the same length");
    }
}

Channel Channel::from_matrix(const Matrix& m) {
    std::vector<Distribution> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i));
    return Channel(std::move(rows));
}

Matrix Channel::as_matrix() const {
    Matrix m(input_count(), output_count());
    for (std::size_t i = 0; i < input_count(); ++i)
        for (std::size_t j = 0; j < output_count(); ++j) m(i, j) = rows_[i][j];
    return m;
}

Distribution Channel::marginal(const Distribution& source) const {
    if (source.size() != input_count())
        throw_validation("source size must match the channel's input count");
    std::vector<double> out(output_count(), 0.0);
    for (std::size_t i = 0; i < input_count(); ++i) {
        if (source[i] == 0.0) continue;
        for (std::size_t j = 0; j < output_count(); ++j) out[j] += source[i] * rows_[i][j];
    }
    return Distribution::normalized(std::move(out));
}

double shannon_information(double prior, double posterior) {
    if (!(prior > 0.0)) throw_validation("undefined prior: prior probability must be positive");
    if (!(posterior >= 0.0)) throw_validation("invalid weight: posterior must be nonnegative");
    if (posterior == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log2(posterior / prior);
}

double shannon_entropy(const Distribution& p) {
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
    }
    return h;
}

double kl_divergence_bits(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size())
        throw_validation("distributions must share one alphabet to compare");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (!(q[i] > 0.0))
            throw_validation(
                "absolute-continuity violation: reference is zero on an event with positive mass");
        d += p[i] * std::log2(p[i] / q[i]);
    }
    return d < 0.0 ? 0.0 : d;  // guard tiny negative rounding residue
}

double shannon_mutual_information(const Distribution& source, const Channel& channel) {
    const Distribution out = channel.marginal(source);
    double mi = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (source[i] == 0.0) continue;
        for (std::size_t j = 0; j < channel.output_count(); ++j) {
            const double w = channel(i, j);
            if (w == 0.0) continue;
            mi += source[i] * w * std::log2(w / out[j]);
        }
    }
    return mi < 0.0 ? 0.0 : mi;
}

}  // namespace seminfo
