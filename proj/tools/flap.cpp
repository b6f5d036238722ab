// flap: run bee-colony experiments, build case datasets and analyse them.
//
//   flap run --problem onemax --runs 10 --seed 7 --out data/onemax
//   flap gen-sukp --items 500 --elements 500 --out sukp500.txt
//   flap analyze --dataset data/onemax/cases.csv --out data/onemax/analysis
//   flap report --cases data/onemax/cases.csv --accuracy data/onemax/analysis/accuracy.csv

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "flap/dataset.hpp"
#include "flap/error.hpp"
#include "flap/experiment.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// Subcommand config file: keys are long option names, flags given on the
// command line win over the file.
void apply_config(CLI::App& cmd, const std::string& path) {
    if (path.empty()) {
        return;
    }
    std::ifstream in(path);
    if (!in) {
        throw flap::IoError("cannot open config file '" + path + "'");
    }
    CLI::ConfigINI format;
    std::size_t line = 0;
    for (const auto& item : format.from_config(in)) {
        ++line;
        const std::string key = item.name;
        if (key == "config") {
            throw flap::ValidationError("config file '" + path + "' cannot include another one");
        }
        auto* opt = cmd.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw flap::ValidationError("config file '" + path + "': unknown key '" + key + "'");
        }
        if (opt->count() == 0) {
            opt->add_result(item.inputs);
            opt->run_callback();
        }
    }
}

void require_value(const std::string& flag, const std::string& value) {
    if (value.empty()) {
        throw flap::ValidationError(flag + " is required");
    }
}

void add_config_option(CLI::App& cmd, std::string& path) {
    cmd.add_option("--config", path, "Read options from a key=value file; flags override it");
}

void add_run(CLI::App& app, flap::ExperimentSpec& spec, std::string& config) {
    auto* cmd = app.add_subcommand("run", "Run seeded colonies and export successful cases");
    add_config_option(*cmd, config);
    cmd->add_option("--problem", spec.problem, "onemax or sukp")
        ->check(CLI::IsMember({"onemax", "sukp"}));
    cmd->add_option("--dims", spec.dims, "Bit-string length (default 1000 onemax, 500 sukp)");
    cmd->add_option("--iters", spec.iters, "Iterations per run (default 150 onemax, 500 sukp)");
    cmd->add_option("--instance", spec.instance, "SUKP instance file (generated if omitted)");
    cmd->add_option("--elements", spec.elements, "Generated SUKP element count (default dims)");
    cmd->add_option("--density", spec.density, "Generated SUKP incidence density");
    cmd->add_option("--capacity-ratio", spec.capacity_ratio, "Generated SUKP capacity ratio");
    cmd->add_option("--instance-seed", spec.instance_seed, "Generated SUKP instance seed");
    cmd->add_option("--runs", spec.runs, "Independent runs");
    cmd->add_option("--colony", spec.colony, "Food sources per colony");
    cmd->add_option("--limit", spec.limit, "Trial limit before a scout restart");
    cmd->add_option("--seed", spec.seed, "Seed of run 0; run i uses seed + i");
    cmd->add_option("--pool", spec.pool, "Comma-separated operator ids");
    cmd->add_option("--record-failures", spec.record_failures,
                    "Also export unsuccessful moves (adds a success column)");
    cmd->add_option("--eap-variant", spec.eap_variant, "literal or sigma-divided")
        ->check(CLI::IsMember({"literal", "sigma-divided"}));
    cmd->add_option("--threads", spec.threads, "Runs executed in parallel");
    cmd->add_option("--out", spec.out, "Output directory (required)");
    cmd->callback([cmd, &spec, &config] {
        apply_config(*cmd, config);
        require_value("--out", spec.out.string());
        const auto result = flap::cmd_run(spec);
        std::cout << "wrote " << result.records.size() << " cases from " << result.runs.size()
                  << " runs to " << spec.out.string() << '\n';
    });
}

void add_gen_sukp(CLI::App& app, flap::SukpGenerator& gen, std::string& path) {
    auto* cmd = app.add_subcommand("gen-sukp", "Generate a random Set-Union Knapsack instance");
    cmd->add_option("--items", gen.items, "Item count m");
    cmd->add_option("--elements", gen.elements, "Element count n");
    cmd->add_option("--density", gen.density, "Probability that an item covers an element");
    cmd->add_option("--capacity-ratio", gen.capacity_ratio, "Capacity / total element weight");
    cmd->add_option("--seed", gen.seed, "Generator seed");
    cmd->add_option("--out", path, "Instance file to write")->required();
    cmd->callback([&gen, &path] {
        flap::cmd_gen_sukp(gen, path);
        std::cout << "wrote " << gen.items << "x" << gen.elements << " instance to " << path
                  << '\n';
    });
}

struct AnalyzeArgs {
    std::string config;
    std::string dataset;
    std::string out;
    std::string problem;
    flap::analysis::EvaluateParams params;
};

void add_analyze(CLI::App& app, AnalyzeArgs& args) {
    auto* cmd = app.add_subcommand("analyze", "Correlation, chi-square and classifier reports");
    add_config_option(*cmd, args.config);
    cmd->add_option("--dataset", args.dataset, "cases.csv produced by 'run' (required)");
    cmd->add_option("--out", args.out, "Output directory (required)");
    cmd->add_option("--problem", args.problem, "Restrict to one problem tag");
    cmd->add_option("--seed", args.params.seed, "Split and model seed");
    cmd->add_option("--test-fraction", args.params.test_fraction, "Stratified test share");
    cmd->add_option("--bins", args.params.chi2_bins, "Chi-square equal-frequency bins");
    cmd->add_option("--trees", args.params.forest.trees, "Random forest size");
    cmd->add_option("--threads", args.params.forest.threads, "Forest training threads");
    cmd->add_option("--hidden", args.params.perceptron.hidden, "Perceptron hidden units");
    cmd->add_option("--mlp-epochs", args.params.perceptron.epochs, "Perceptron epochs");
    cmd->add_option("--margin-epochs", args.params.margin.epochs, "Margin classifier epochs");
    cmd->add_option("--lambda", args.params.margin.lambda, "Margin classifier regularisation");
    cmd->callback([cmd, &args] {
        apply_config(*cmd, args.config);
        require_value("--dataset", args.dataset);
        require_value("--out", args.out);
        const auto report = flap::cmd_analyze(args.dataset, args.out, args.params, args.problem);
        std::cout << "problem " << report.problem << "\n"
                  << flap::analysis::format_accuracy_table(report);
    });
}

struct ReportArgs {
    std::string cases;
    std::string accuracy;
};

void add_report(CLI::App& app, ReportArgs& args) {
    auto* cmd = app.add_subcommand("report", "Print success counts and accuracy tables");
    cmd->add_option("--cases", args.cases, "cases.csv produced by 'run'")->required();
    cmd->add_option("--accuracy", args.accuracy, "accuracy.csv produced by 'analyze'");
    cmd->callback([&args] {
        const auto records = flap::import_csv(args.cases);
        std::cout << "Successful moves per operator and phase\n"
                  << flap::format_success_table(flap::success_table(records));
        if (!args.accuracy.empty()) {
            std::ifstream in(args.accuracy);
            if (!in) {
                throw flap::IoError("cannot open '" + args.accuracy + "'");
            }
            std::cout << "\nTest accuracy\n" << in.rdbuf();
        }
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fitness-landscape feature datasets from a bee colony with an operator pool"};
    app.require_subcommand(1);

    flap::ExperimentSpec spec;
    std::string run_config;
    flap::SukpGenerator gen;
    std::string gen_path;
    AnalyzeArgs analyze_args;
    ReportArgs report_args;
    add_run(app, spec, run_config);
    add_gen_sukp(app, gen, gen_path);
    add_analyze(app, analyze_args);
    add_report(app, report_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    } catch (const flap::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const flap::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
