#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "seminfo/entropies.hpp"
#include "seminfo/experiments.hpp"
#include "seminfo/prob.hpp"
#include "seminfo/rate_fidelity.hpp"
#include "seminfo/semantic.hpp"

namespace seminfo::config {

using json = nlohmann::json;

// Structural problems (bad JSON, missing/mis-typed fields) raise parse errors;
// value-level problems (negative weights, bad sums) raise validation errors
// naming the offending field.

struct InfoTask {
    Alphabet alphabet;
    Distribution prior;
    TruthFunction truth;
    std::optional<std::size_t> event;  // absent: report every event
    bool use_closed_form = false;
};

struct KullbackTask {
    Distribution prior;
    Distribution evidence;
    TruthFunction truth;
    double degree_floor = default_degree_floor;
};

struct SelectTask {
    Distribution prior;
    Distribution evidence;
    SemanticChannel candidates;
    double degree_floor = default_degree_floor;
};

struct TranslateTask {
    Distribution prior;
    TruthFunction source_message;
    SemanticChannel candidates;
    double degree_floor = default_degree_floor;
};

struct EntropiesTask {
    SemanticSystem system;
};

struct RateFidelityTask {
    Distribution source;
    PayoffMatrix payoff;
    std::vector<double> s_grid;
    SolveOptions solve;
};

struct RateDistortionTask {
    Distribution source;
    DistortionMatrix distortion;
    std::vector<double> s_grid;
    SolveOptions solve;
};

using ExperimentTask = std::variant<ForecastStudyConfig, CurveFamilyConfig, DepthStudyConfig>;

// Read and parse a JSON document from disk; parse failures carry the
// location reported by the JSON parser.
json load_document(const std::string& path);

InfoTask parse_info(const json& document);
KullbackTask parse_kullback(const json& document);
SelectTask parse_select(const json& document);
TranslateTask parse_translate(const json& document);
EntropiesTask parse_entropies(const json& document);
RateFidelityTask parse_rate_fidelity(const json& document);
RateDistortionTask parse_rate_distortion(const json& document);
ExperimentTask parse_experiment(const json& document);

// "start:stop:count" -> evenly spaced slope grid (used by the --s-grid flag).
std::vector<double> parse_slope_spec(const std::string& spec);

}  // namespace seminfo::config
