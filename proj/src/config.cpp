#include "seminfo/config.hpp"

#include <cstddef>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace seminfo::config {

namespace {

// Re-throw validation errors with the config field path prepended, so CLI
// diagnostics name the offending field.
template <typename F>
auto at_field(const std::string& path, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::validation)
            throw Error(ErrorKind::validation, "field '" + path + "': " + e.what());
        throw;
    }
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) {
        if (path.empty()) throw_parse("document must be a JSON object");
        throw_parse("field '" + path + "' must be an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        const std::string full = path.empty() ? std::string(key) : path + "." + key;
        throw_parse("missing field '" + full + "'");
    }
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw_parse("field '" + path + "' must be a number");
    return j.get<double>();
}

int as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw_parse("field '" + path + "' must be an integer");
    return j.get<int>();
}

bool as_boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw_parse("field '" + path + "' must be a boolean");
    return j.get<bool>();
}

std::vector<double> as_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw_parse("field '" + path + "' must be an array of numbers");
    std::vector<double> values;
    values.reserve(j.size());
    for (const json& v : j) {
        if (!v.is_number()) throw_parse("field '" + path + "' must contain only numbers");
        values.push_back(v.get<double>());
    }
    return values;
}

std::vector<double> linear_grid(double start, double stop, int count, const std::string& path) {
    if (count < 1) throw Error(ErrorKind::validation, "field '" + path + "': count must be >= 1");
    if (count == 1) {
        if (start != stop)
            throw Error(ErrorKind::validation,
                        "field '" + path + "': single-point grid requires start == stop");
        return {start};
    }
    if (!(start < stop))
        throw Error(ErrorKind::validation, "field '" + path + "': start must be below stop");
    std::vector<double> values(static_cast<std::size_t>(count));
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = start + step * i;
    values.back() = stop;
    return values;
}

std::vector<double> parse_grid(const json& j, const std::string& path) {
    if (j.is_array()) return as_number_array(j, path);
    if (j.is_object()) {
        const double start = as_number(require(j, "start", path), path + ".start");
        const double stop = as_number(require(j, "stop", path), path + ".stop");
        const int count = as_integer(require(j, "count", path), path + ".count");
        return linear_grid(start, stop, count, path);
    }
    throw_parse("field '" + path + "' must be an array or {start, stop, count}");
}

Alphabet parse_alphabet(const json& j, const std::string& path) {
    return at_field(path, [&]() -> Alphabet {
        if (j.is_object()) {
            if (j.contains("size"))
                return Alphabet::indexed(
                    static_cast<std::size_t>(as_integer(j["size"], path + ".size")));
            if (j.contains("start")) {
                const double start = as_number(require(j, "start", path), path + ".start");
                const double step = as_number(require(j, "step", path), path + ".step");
                const int count = as_integer(require(j, "count", path), path + ".count");
                if (count < 1)
                    throw_validation("count must be >= 1");
                return Alphabet::linspace(start, step, static_cast<std::size_t>(count));
            }
            if (j.contains("labels")) {
                const json& labels_json = j["labels"];
                if (!labels_json.is_array())
                    throw_parse("field '" + path + ".labels' must be an array");
                std::vector<std::string> labels;
                for (const json& v : labels_json) {
                    if (!v.is_string())
                        throw_parse("field '" + path + ".labels' must contain strings");
                    labels.push_back(v.get<std::string>());
                }
                std::optional<std::vector<double>> values;
                if (j.contains("values"))
                    values = as_number_array(j["values"], path + ".values");
                return Alphabet(std::move(labels), std::move(values));
            }
        }
        throw_parse("field '" + path + "' must define size, start/step/count, or labels");
    });
}

Distribution parse_distribution(const json& j, const std::string& path) {
    return at_field(path, [&]() -> Distribution {
        if (j.is_array()) return Distribution(as_number_array(j, path));
        if (j.is_object()) {
            if (j.contains("weights"))
                return Distribution::normalized(
                    as_number_array(j["weights"], path + ".weights"));
            if (j.contains("probabilities"))
                return Distribution(as_number_array(j["probabilities"], path + ".probabilities"));
        }
        throw_parse("field '" + path + "' must be a probability array or {weights: [...]}");
    });
}

TruthFunction parse_truth(const json& j, const std::string& path, const Alphabet* alphabet) {
    return at_field(path, [&]() -> TruthFunction {
        if (j.is_array()) return TruthFunction(as_number_array(j, path));
        if (j.is_object()) {
            if (j.contains("gaussian")) {
                const json& g = j["gaussian"];
                const double center = as_number(require(g, "center", path + ".gaussian"),
                                                path + ".gaussian.center");
                const double width = as_number(require(g, "width", path + ".gaussian"),
                                               path + ".gaussian.width");
                if (alphabet == nullptr)
                    throw_validation("gaussian truth function requires a numeric alphabet");
                return gaussian_truth(*alphabet, center, width);
            }
            if (j.contains("degrees"))
                return TruthFunction(as_number_array(j["degrees"], path + ".degrees"));
        }
        throw_parse("field '" + path + "' must be a degree array or {gaussian: {center, width}}");
    });
}

SemanticChannel parse_semantics(const json& j, const std::string& path, const Alphabet* alphabet) {
    if (!j.is_array() || j.empty())
        throw_parse("field '" + path + "' must be a non-empty array of truth functions");
    std::vector<TruthFunction> messages;
    messages.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        messages.push_back(parse_truth(j[i], path + "[" + std::to_string(i) + "]", alphabet));
    return at_field(path, [&] { return SemanticChannel(std::move(messages)); });
}

Matrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty())
        throw_parse("field '" + path + "' must be a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    rows.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        rows.push_back(as_number_array(j[i], path + "[" + std::to_string(i) + "]"));
    return at_field(path, [&] { return Matrix::from_rows(rows); });
}

Channel parse_channel(const json& j, const std::string& path) {
    const Matrix m = parse_matrix(j, path);
    return at_field(path, [&] { return Channel::from_matrix(m); });
}

double parse_floor(const json& j) {
    if (!j.contains("epsilon")) return default_degree_floor;
    return at_field("epsilon", [&] {
        const double floor = as_number(j["epsilon"], "epsilon");
        if (!(floor > 0.0 && floor <= 1.0))
            throw_validation("degree floor must lie in (0, 1]");
        return floor;
    });
}

SolveOptions parse_solve_options(const json& j) {
    SolveOptions opts;
    if (j.contains("tolerance"))
        opts.tolerance = as_number(j["tolerance"], "tolerance");
    if (j.contains("max_iterations"))
        opts.max_iterations = as_integer(j["max_iterations"], "max_iterations");
    return opts;
}

std::optional<Alphabet> parse_optional_alphabet(const json& j, std::size_t fallback_size) {
    if (j.contains("alphabet")) return parse_alphabet(j["alphabet"], "alphabet");
    if (fallback_size > 0) return Alphabet::indexed(fallback_size);
    return std::nullopt;
}

}  // namespace

json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_parse("cannot open config document '" + path + "'");
    try {
        return json::parse(in, nullptr, true, true);  // allow // and /* */ comments
    } catch (const json::parse_error& e) {
        throw_parse("cannot parse '" + path + "': " + e.what());
    }
}

InfoTask parse_info(const json& document) {
    Distribution prior = parse_distribution(require(document, "prior", ""), "prior");
    std::optional<Alphabet> alphabet = parse_optional_alphabet(document, prior.size());
    TruthFunction truth =
        parse_truth(require(document, "truth", ""), "truth", alphabet ? &*alphabet : nullptr);
    std::optional<std::size_t> event;
    if (document.contains("event")) {
        const int idx = as_integer(document["event"], "event");
        if (idx < 0)
            throw Error(ErrorKind::validation, "field 'event': index must be nonnegative");
        event = static_cast<std::size_t>(idx);
    }
    bool closed_form = false;
    if (document.contains("closed_form"))
        closed_form = as_boolean(document["closed_form"], "closed_form");
    return InfoTask{std::move(*alphabet), std::move(prior), std::move(truth), event, closed_form};
}

KullbackTask parse_kullback(const json& document) {
    Distribution prior = parse_distribution(require(document, "prior", ""), "prior");
    std::optional<Alphabet> alphabet = parse_optional_alphabet(document, prior.size());
    Distribution evidence = parse_distribution(require(document, "evidence", ""), "evidence");
    TruthFunction truth =
        parse_truth(require(document, "truth", ""), "truth", alphabet ? &*alphabet : nullptr);
    return KullbackTask{std::move(prior), std::move(evidence), std::move(truth),
                        parse_floor(document)};
}

SelectTask parse_select(const json& document) {
    Distribution prior = parse_distribution(require(document, "prior", ""), "prior");
    std::optional<Alphabet> alphabet = parse_optional_alphabet(document, prior.size());
    Distribution evidence = parse_distribution(require(document, "evidence", ""), "evidence");
    SemanticChannel candidates = parse_semantics(require(document, "candidates", ""), "candidates",
                                                 alphabet ? &*alphabet : nullptr);
    return SelectTask{std::move(prior), std::move(evidence), std::move(candidates),
                      parse_floor(document)};
}

TranslateTask parse_translate(const json& document) {
    Distribution prior = parse_distribution(require(document, "prior", ""), "prior");
    std::optional<Alphabet> alphabet = parse_optional_alphabet(document, prior.size());
    TruthFunction source =
        parse_truth(require(document, "source", ""), "source", alphabet ? &*alphabet : nullptr);
    SemanticChannel candidates = parse_semantics(require(document, "candidates", ""), "candidates",
                                                 alphabet ? &*alphabet : nullptr);
    return TranslateTask{std::move(prior), std::move(source), std::move(candidates),
                         parse_floor(document)};
}

EntropiesTask parse_entropies(const json& document) {
    Distribution source = parse_distribution(require(document, "source", ""), "source");
    std::optional<Alphabet> alphabet = parse_optional_alphabet(document, source.size());
    Distribution forecast = parse_distribution(require(document, "forecast", ""), "forecast");
    Channel channel = parse_channel(require(document, "channel", ""), "channel");
    SemanticChannel semantics = parse_semantics(require(document, "semantics", ""), "semantics",
                                                alphabet ? &*alphabet : nullptr);
    const double floor = parse_floor(document);
    return EntropiesTask{SemanticSystem(std::move(source), std::move(forecast),
                                        std::move(channel), std::move(semantics), floor)};
}

RateFidelityTask parse_rate_fidelity(const json& document) {
    Distribution source = parse_distribution(require(document, "source", ""), "source");
    std::optional<Alphabet> alphabet = parse_optional_alphabet(document, source.size());
    std::optional<PayoffMatrix> payoff;
    if (document.contains("payoff")) {
        payoff.emplace(at_field(
            "payoff", [&] { return PayoffMatrix(parse_matrix(document["payoff"], "payoff")); }));
    } else if (document.contains("semantics")) {
        SemanticChannel semantics =
            parse_semantics(document["semantics"], "semantics", alphabet ? &*alphabet : nullptr);
        const double floor = parse_floor(document);
        payoff.emplace(at_field(
            "semantics", [&] { return payoff_from_semantics(source, semantics, floor); }));
    } else {
        throw_parse("missing field 'payoff' (or 'semantics' to derive one)");
    }
    std::vector<double> s_grid = parse_grid(require(document, "s_grid", ""), "s_grid");
    return RateFidelityTask{std::move(source), std::move(*payoff), std::move(s_grid),
                            parse_solve_options(document)};
}

RateDistortionTask parse_rate_distortion(const json& document) {
    Distribution source = parse_distribution(require(document, "source", ""), "source");
    DistortionMatrix distortion = at_field("distortion", [&] {
        return DistortionMatrix(parse_matrix(require(document, "distortion", ""), "distortion"));
    });
    std::vector<double> s_grid = parse_grid(require(document, "s_grid", ""), "s_grid");
    return RateDistortionTask{std::move(source), std::move(distortion), std::move(s_grid),
                              parse_solve_options(document)};
}

ExperimentTask parse_experiment(const json& document) {
    const json& type_json = require(document, "type", "");
    if (!type_json.is_string()) throw_parse("field 'type' must be a string");
    const std::string type = type_json.get<std::string>();

    if (type == "fig2" || type == "forecast_curves") {
        ForecastStudyConfig config;
        if (document.contains("prior_center"))
            config.prior_center = as_number(document["prior_center"], "prior_center");
        if (document.contains("prior_width"))
            config.prior_width = as_number(document["prior_width"], "prior_width");
        if (document.contains("grid")) {
            const json& g = document["grid"];
            config.grid_start = as_number(require(g, "start", "grid"), "grid.start");
            config.grid_step = as_number(require(g, "step", "grid"), "grid.step");
            config.grid_size =
                static_cast<std::size_t>(as_integer(require(g, "count", "grid"), "grid.count"));
        }
        const json& forecasts = require(document, "forecasts", "");
        if (!forecasts.is_array())
            throw_parse("field 'forecasts' must be an array");
        for (std::size_t i = 0; i < forecasts.size(); ++i) {
            const json& f = forecasts[i];
            const std::string path = "forecasts[" + std::to_string(i) + "]";
            ForecastSpec spec;
            if (f.contains("flat") && as_boolean(f["flat"], path + ".flat")) {
                spec.flat = true;
            } else {
                spec.center = as_number(require(f, "center", path), path + ".center");
                spec.width = as_number(require(f, "width", path), path + ".width");
            }
            config.forecasts.push_back(spec);
        }
        return config;
    }

    if (type == "fig4" || type == "curve_family") {
        CurveFamilyConfig config;
        if (document.contains("bits")) config.bits = as_integer(document["bits"], "bits");
        config.widths = as_number_array(require(document, "widths", ""), "widths");
        config.s_grid = parse_grid(require(document, "s_grid", ""), "s_grid");
        config.solve = parse_solve_options(document);
        return config;
    }

    if (type == "fig5" || type == "depth_study") {
        DepthStudyConfig config;
        if (document.contains("width")) config.width = as_number(document["width"], "width");
        if (document.contains("min_bits"))
            config.min_bits = as_integer(document["min_bits"], "min_bits");
        if (document.contains("max_bits"))
            config.max_bits = as_integer(document["max_bits"], "max_bits");
        if (document.contains("slope_tolerance"))
            config.slope_tolerance = as_number(document["slope_tolerance"], "slope_tolerance");
        if (document.contains("plateau_tolerance"))
            config.plateau_tolerance =
                as_number(document["plateau_tolerance"], "plateau_tolerance");
        config.solve = parse_solve_options(document);
        return config;
    }

    throw_parse("unknown experiment type '" + type + "'");
}

std::vector<double> parse_slope_spec(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw_parse("slope grid override must look like start:stop:count");
    try {
        const double start = std::stod(spec.substr(0, first));
        const double stop = std::stod(spec.substr(first + 1, second - first - 1));
        const int count = std::stoi(spec.substr(second + 1));
        return linear_grid(start, stop, count, "s_grid");
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw_parse("slope grid override must look like start:stop:count");
    }
}

}  // namespace seminfo::config
