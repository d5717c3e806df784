#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "seminfo/config.hpp"
#include "seminfo/csv.hpp"
#include "seminfo/entropies.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/experiments.hpp"
#include "seminfo/rate_fidelity.hpp"
#include "seminfo/semantic.hpp"

namespace {

using seminfo::Error;
using seminfo::ErrorKind;
namespace config = seminfo::config;

struct CommonFlags {
    std::string input;
    std::string output;
    std::optional<double> epsilon;
    std::optional<int> max_iterations;
    std::optional<std::string> s_grid;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::validation, "cannot open output path '" + path + "'");
    out << content;
}

// Apply --epsilon / --max-iter / --s-grid on top of the loaded document so a
// flag always wins over the corresponding config field.
void apply_overrides(config::json& document, const CommonFlags& flags) {
    if (flags.epsilon) document["epsilon"] = *flags.epsilon;
    if (flags.max_iterations) document["max_iterations"] = *flags.max_iterations;
    if (flags.s_grid) document["s_grid"] = config::parse_slope_spec(*flags.s_grid);
}

std::string selection_report(const seminfo::SelectionResult& result) {
    std::string out = "selected=" + std::to_string(result.index) + "\n";
    out += "candidate,score_bits\n";
    for (std::size_t j = 0; j < result.scores.size(); ++j)
        out += std::to_string(j) + "," + seminfo::format_real(result.scores[j]) + "\n";
    return out;
}

int run_info(const config::json& document, const CommonFlags& flags) {
    const config::InfoTask task = config::parse_info(document);
    std::string out;
    const double q = seminfo::logical_probability(task.prior, task.truth);
    out += "logical_probability=" + seminfo::format_real(q) + "\n";
    const auto info_at = [&](std::size_t i) {
        return task.use_closed_form
                   ? seminfo::semantic_information_gaussian(task.alphabet, task.prior, task.truth,
                                                            i)
                   : seminfo::semantic_information(task.prior, task.truth, i);
    };
    if (task.event) {
        out += "info_bits=" + seminfo::format_real(info_at(*task.event)) + "\n";
    } else {
        out += "event,info_bits\n";
        for (std::size_t i = 0; i < task.truth.size(); ++i)
            out += task.alphabet.labels()[i] + "," + seminfo::format_real(info_at(i)) + "\n";
    }
    write_output(flags.output, out);
    return 0;
}

int run_kullback(const config::json& document, const CommonFlags& flags) {
    const config::KullbackTask task = config::parse_kullback(document);
    const double score = seminfo::generalized_kullback_score(task.evidence, task.prior, task.truth,
                                                             task.degree_floor);
    const double cond = seminfo::generalized_conditional_entropy(task.evidence, task.prior,
                                                                 task.truth, task.degree_floor);
    std::string out = "kullback_bits=" + seminfo::format_real(score) + "\n";
    out += "conditional_entropy_bits=" + seminfo::format_real(cond) + "\n";
    write_output(flags.output, out);
    return 0;
}

int run_select(const config::json& document, const CommonFlags& flags) {
    const config::SelectTask task = config::parse_select(document);
    const seminfo::SelectionResult result = seminfo::select_best_message(
        task.candidates, task.evidence, task.prior, task.degree_floor);
    write_output(flags.output, selection_report(result));
    return 0;
}

int run_translate(const config::json& document, const CommonFlags& flags) {
    const config::TranslateTask task = config::parse_translate(document);
    const seminfo::SelectionResult result = seminfo::select_translation(
        task.source_message, task.prior, task.candidates, task.degree_floor);
    write_output(flags.output, selection_report(result));
    return 0;
}

int run_entropies(const config::json& document, const CommonFlags& flags) {
    const config::EntropiesTask task = config::parse_entropies(document);
    std::string out;
    out += "generalized_mutual_information_bits=" +
           seminfo::format_real(seminfo::generalized_mutual_information(task.system)) + "\n";
    out += "forecasting_entropy_bits=" +
           seminfo::format_real(seminfo::forecasting_entropy(task.system)) + "\n";
    out += "posterior_forecasting_entropy_bits=" +
           seminfo::format_real(seminfo::posterior_forecasting_entropy(task.system)) + "\n";
    out += "generalized_output_entropy_bits=" +
           seminfo::format_real(seminfo::generalized_output_entropy(task.system)) + "\n";
    out += "fuzzy_conditional_entropy_bits=" +
           seminfo::format_real(seminfo::fuzzy_conditional_entropy(task.system)) + "\n";
    write_output(flags.output, out);
    return 0;
}

int run_rate_fidelity(const config::json& document, const CommonFlags& flags) {
    const config::RateFidelityTask task = config::parse_rate_fidelity(document);
    const std::vector<seminfo::RateFidelityPoint> curve =
        seminfo::sweep_rate_fidelity(task.source, task.payoff, task.s_grid, task.solve);
    write_output(flags.output, seminfo::rate_fidelity_csv(curve));
    for (const auto& pt : curve) {
        if (!pt.converged) return 4;
    }
    return 0;
}

int run_rate_distortion(const config::json& document, const CommonFlags& flags) {
    const config::RateDistortionTask task = config::parse_rate_distortion(document);
    const std::vector<seminfo::RateDistortionPoint> curve =
        seminfo::sweep_rate_distortion(task.source, task.distortion, task.s_grid, task.solve);
    write_output(flags.output, seminfo::rate_distortion_csv(curve));
    for (const auto& pt : curve) {
        if (!pt.converged) return 4;
    }
    return 0;
}

int run_experiment(const config::json& document, const CommonFlags& flags) {
    const config::ExperimentTask task = config::parse_experiment(document);
    if (std::holds_alternative<seminfo::ForecastStudyConfig>(task)) {
        const auto study =
            seminfo::forecast_information_study(std::get<seminfo::ForecastStudyConfig>(task));
        write_output(flags.output, seminfo::forecast_study_csv(study));
        return 0;
    }
    if (std::holds_alternative<seminfo::CurveFamilyConfig>(task)) {
        const auto family = seminfo::rate_fidelity_family(std::get<seminfo::CurveFamilyConfig>(task));
        write_output(flags.output, seminfo::curve_family_csv(family));
        for (const auto& curve : family.curves)
            for (const auto& pt : curve)
                if (!pt.converged) return 4;
        return 0;
    }
    const auto study = seminfo::depth_saturation_study(std::get<seminfo::DepthStudyConfig>(task));
    write_output(flags.output, seminfo::depth_study_csv({study}));
    for (const auto& pt : study.points)
        if (!pt.converged) return 4;
    return 0;
}

// Resolve `experiment` input: a literal config path, or a preset name looked
// up under configs/ next to the working directory or the installed tree.
std::string resolve_experiment_input(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return arg;
    std::vector<fs::path> candidates;
    candidates.emplace_back(fs::path("configs") / (arg + ".json"));
    std::error_code ec;
    const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        candidates.emplace_back(exe.parent_path() / "configs" / (arg + ".json"));
        candidates.emplace_back(exe.parent_path() / ".." / "configs" / (arg + ".json"));
        candidates.emplace_back(exe.parent_path() / ".." / ".." / "configs" / (arg + ".json"));
    }
    for (const fs::path& candidate : candidates) {
        if (fs::exists(candidate)) return candidate.string();
    }
    throw Error(ErrorKind::parse, "cannot find preset or config document '" + arg + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized-information toolkit: semantic measures and rate-fidelity curves"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::optional<double> experiment_width;
    std::optional<int> experiment_max_bits;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", flags.input, "config document (JSON) or preset name")
            ->required();
        cmd->add_option("--output", flags.output, "write results to this path instead of stdout");
        cmd->add_option("--epsilon", flags.epsilon, "override the truth-degree floor");
        cmd->add_option("--max-iter", flags.max_iterations,
                        "override the solver iteration budget");
        cmd->add_option("--s-grid", flags.s_grid, "override the slope grid as start:stop:count");
    };

    add_common(app.add_subcommand("info", "pointwise information of one message"));
    add_common(app.add_subcommand("kullback", "evidence-weighted information score"));
    add_common(app.add_subcommand("select", "pick the best message for given evidence"));
    add_common(app.add_subcommand("translate", "pick the best translation of a message"));
    add_common(app.add_subcommand("entropies", "the five generalized entropy quantities"));
    add_common(app.add_subcommand("rate-fidelity", "trace R(G) over a slope grid"));
    add_common(app.add_subcommand("rate-distortion", "trace classical R(D) over a slope grid"));
    CLI::App* experiment =
        app.add_subcommand("experiment", "run a packaged study (fig2, fig4, fig5, or a config)");
    add_common(experiment);
    experiment->add_option("--d", experiment_width, "override the study's discrimination width");
    experiment->add_option("--kmax", experiment_max_bits, "override the study's maximum depth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try {
        std::string input_path = flags.input;
        if (subcommand == "experiment") input_path = resolve_experiment_input(flags.input);
        config::json document = config::load_document(input_path);
        apply_overrides(document, flags);
        if (subcommand == "experiment") {
            if (experiment_width) document["width"] = *experiment_width;
            if (experiment_max_bits) document["max_bits"] = *experiment_max_bits;
        }

        if (subcommand == "info") return run_info(document, flags);
        if (subcommand == "kullback") return run_kullback(document, flags);
        if (subcommand == "select") return run_select(document, flags);
        if (subcommand == "translate") return run_translate(document, flags);
        if (subcommand == "entropies") return run_entropies(document, flags);
        if (subcommand == "rate-fidelity") return run_rate_fidelity(document, flags);
        if (subcommand == "rate-distortion") return run_rate_distortion(document, flags);
        return run_experiment(document, flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
