#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "flap/abc.hpp"
#include "flap/analysis/report.hpp"
#include "flap/analysis/statistics.hpp"
#include "flap/dataset.hpp"
#include "flap/error.hpp"
#include "flap/experiment.hpp"
#include "flap/features.hpp"
#include "flap/operators.hpp"
#include "flap/problems.hpp"

namespace py = pybind11;
using namespace flap;

namespace {

BitString to_bits(const std::string& s) { return BitString::from_string(s); }

std::vector<BitString> to_bits(const std::vector<std::string>& list) {
    std::vector<BitString> out;
    out.reserve(list.size());
    for (const auto& s : list) {
        out.push_back(BitString::from_string(s));
    }
    return out;
}

template <std::size_t N>
std::vector<double> to_list(const std::array<double, N>& a) {
    return {a.begin(), a.end()};
}

PopulationSnapshot make_snapshot(const std::vector<std::string>& parents,
                                 const std::vector<std::string>& children,
                                 std::vector<double> parent_fitness,
                                 std::vector<double> child_fitness, const std::string& gbest,
                                 double gbest_fitness, std::vector<std::size_t> trials,
                                 std::size_t trial_max) {
    return PopulationSnapshot::build(to_bits(parents), to_bits(children),
                                     std::move(parent_fitness), std::move(child_fitness),
                                     to_bits(gbest), gbest_fitness, std::move(trials), trial_max);
}

py::dict ranking_dict(const analysis::ImportanceRanking& r) {
    py::dict d;
    d["method"] = r.method;
    d["names"] = r.names;
    d["raw"] = r.raw;
    d["scores"] = r.scores;
    std::vector<std::string> order;
    for (auto i : r.order) {
        order.push_back(r.names[i]);
    }
    d["order"] = order;
    return d;
}

std::vector<CaseRecord> experiment_records(const ExperimentSpec& spec) {
    py::gil_scoped_release release;
    return run_experiment(spec).records;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Binary bee colony with feature recording and operator-classification analysis";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
    m.attr("FEATURE_NAMES") = names;
    m.attr("CSV_HEADER") = csv_header();

    m.def("onemax_fitness", [](const std::string& x) { return onemax_fitness(to_bits(x)); },
          py::arg("bits"));
    m.def("hamming", [](const std::string& a, const std::string& b) {
        return hamming(to_bits(a), to_bits(b));
    });
    m.def("phase_of", &phase_of, py::arg("iteration"), py::arg("max_iter"));

    py::class_<SukpInstance>(m, "SukpInstance")
        .def(py::init<>())
        .def_readwrite("items", &SukpInstance::items)
        .def_readwrite("elements", &SukpInstance::elements)
        .def_readwrite("capacity", &SukpInstance::capacity)
        .def_readwrite("profits", &SukpInstance::profits)
        .def_readwrite("weights", &SukpInstance::weights)
        .def_readwrite("incidence", &SukpInstance::incidence)
        .def("validate", &SukpInstance::validate)
        .def("__eq__", [](const SukpInstance& a, const SukpInstance& b) { return a == b; })
        .def("__repr__", [](const SukpInstance& s) {
            return "SukpInstance(items=" + std::to_string(s.items) +
                   ", elements=" + std::to_string(s.elements) + ")";
        });

    m.def(
        "generate_sukp",
        [](std::size_t items, std::size_t elements, double density, double capacity_ratio,
           std::uint64_t seed) {
            return generate_sukp({items, elements, density, capacity_ratio, seed});
        },
        py::arg("items") = 500, py::arg("elements") = 500, py::arg("density") = 0.1,
        py::arg("capacity_ratio") = 0.5, py::arg("seed") = 1);
    m.def("save_sukp", &save_sukp, py::arg("instance"), py::arg("path"));
    m.def("load_sukp", &load_sukp, py::arg("path"));
    m.def("sukp_union_weight", [](const std::string& x, const SukpInstance& inst) {
        return sukp_union_weight(to_bits(x), inst);
    });
    m.def("sukp_fitness", [](const std::string& x, const SukpInstance& inst) {
        return sukp_fitness(to_bits(x), inst);
    });
    m.def(
        "sukp_repair",
        [](const std::string& x, const SukpInstance& inst, std::uint64_t seed) {
            Rng rng(seed);
            return sukp_repair(to_bits(x), inst, rng).to_string();
        },
        py::arg("bits"), py::arg("instance"), py::arg("seed") = 1);

    m.def(
        "apply_operator",
        [](int op, const std::string& parent, const std::string& neighbor,
           const std::string& gbest, std::uint64_t seed) {
            Rng rng(seed);
            const auto p = to_bits(parent), n = to_bits(neighbor), g = to_bits(gbest);
            return apply_operator(operator_from_index(op), {p, n, g, rng}).to_string();
        },
        py::arg("op"), py::arg("parent"), py::arg("neighbor"), py::arg("gbest"),
        py::arg("seed") = 1);

    m.def(
        "population_features",
        [](const std::vector<std::string>& parents, const std::vector<std::string>& children,
           std::vector<double> parent_fitness, std::vector<double> child_fitness,
           const std::string& gbest, double gbest_fitness, std::vector<std::size_t> trials,
           std::size_t trial_max, bool sigma_divided) {
            const auto s = make_snapshot(parents, children, std::move(parent_fitness),
                                         std::move(child_fitness), gbest, gbest_fitness,
                                         std::move(trials), trial_max);
            return to_list(population_features(
                s, sigma_divided ? EapVariant::SigmaDivided : EapVariant::Literal));
        },
        py::arg("parents"), py::arg("children"), py::arg("parent_fitness"),
        py::arg("child_fitness"), py::arg("gbest"), py::arg("gbest_fitness"), py::arg("trials"),
        py::arg("trial_max"), py::arg("sigma_divided") = false);
    m.def(
        "individual_features",
        [](const std::vector<std::string>& parents, const std::vector<double>& parent_fitness,
           const std::string& gbest, double gbest_fitness, std::size_t trial_max,
           const std::string& parent, const std::string& child, double fp, double fc,
           std::size_t trial, std::size_t op_success, std::size_t op_total) {
            const auto s = make_snapshot(parents, parents, parent_fitness, parent_fitness, gbest,
                                         gbest_fitness,
                                         std::vector<std::size_t>(parents.size(), 0), trial_max);
            const auto p = to_bits(parent), c = to_bits(child);
            return to_list(individual_features({p, c, fp, fc, trial, op_success, op_total}, s));
        },
        py::arg("parents"), py::arg("parent_fitness"), py::arg("gbest"),
        py::arg("gbest_fitness"), py::arg("trial_max"), py::arg("parent"), py::arg("child"),
        py::arg("parent_fitness_move"), py::arg("child_fitness"), py::arg("trial"),
        py::arg("op_success"), py::arg("op_total"));

    py::class_<CaseRecord>(m, "CaseRecord")
        .def_readonly("problem", &CaseRecord::problem)
        .def_readonly("run_id", &CaseRecord::run_id)
        .def_readonly("iteration", &CaseRecord::iteration)
        .def_readonly("phase", &CaseRecord::phase)
        .def_property_readonly("op", [](const CaseRecord& r) { return int(index_of(r.op)); })
        .def_property_readonly("features", [](const CaseRecord& r) { return to_list(r.features); })
        .def_readonly("parent_fitness", &CaseRecord::parent_fitness)
        .def_readonly("child_fitness", &CaseRecord::child_fitness)
        .def_readonly("success", &CaseRecord::success)
        .def("as_dict", [](const CaseRecord& r) {
            py::dict d;
            d["problem"] = r.problem;
            d["run_id"] = r.run_id;
            d["iteration"] = r.iteration;
            d["phase"] = r.phase;
            for (std::size_t k = 0; k < kFeatureCount; ++k) {
                d[py::str(std::string(kFeatureNames[k]))] = r.features[k];
            }
            d["parent_fitness"] = r.parent_fitness;
            d["child_fitness"] = r.child_fitness;
            d["op"] = int(index_of(r.op));
            d["success"] = r.success;
            return d;
        });

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init([](const std::string& problem, std::size_t dims, std::size_t iters,
                         std::size_t runs, std::size_t colony, std::size_t limit,
                         std::uint64_t seed, const std::string& pool, bool record_failures,
                         const std::string& eap_variant, const std::string& instance,
                         std::size_t elements, double density, double capacity_ratio,
                         std::uint64_t instance_seed, std::size_t threads,
                         const std::string& out) {
                 ExperimentSpec s;
                 s.problem = problem;
                 s.dims = dims;
                 s.iters = iters;
                 s.runs = runs;
                 s.colony = colony;
                 s.limit = limit;
                 s.seed = seed;
                 s.pool = pool;
                 s.record_failures = record_failures;
                 s.eap_variant = eap_variant;
                 s.instance = instance;
                 s.elements = elements;
                 s.density = density;
                 s.capacity_ratio = capacity_ratio;
                 s.instance_seed = instance_seed;
                 s.threads = threads;
                 s.out = out;
                 return s;
             }),
             py::kw_only(), py::arg("problem") = "onemax", py::arg("dims") = 0,
             py::arg("iters") = 0, py::arg("runs") = 10, py::arg("colony") = 20,
             py::arg("limit") = 100, py::arg("seed") = 1, py::arg("pool") = "0,1,2,3",
             py::arg("record_failures") = false, py::arg("eap_variant") = "literal",
             py::arg("instance") = "", py::arg("elements") = 0, py::arg("density") = 0.1,
             py::arg("capacity_ratio") = 0.5, py::arg("instance_seed") = 1,
             py::arg("threads") = 1, py::arg("out") = "")
        .def_readwrite("problem", &ExperimentSpec::problem)
        .def_readwrite("dims", &ExperimentSpec::dims)
        .def_readwrite("iters", &ExperimentSpec::iters)
        .def_readwrite("runs", &ExperimentSpec::runs)
        .def_readwrite("colony", &ExperimentSpec::colony)
        .def_readwrite("limit", &ExperimentSpec::limit)
        .def_readwrite("seed", &ExperimentSpec::seed)
        .def_readwrite("pool", &ExperimentSpec::pool)
        .def_readwrite("record_failures", &ExperimentSpec::record_failures)
        .def_readwrite("eap_variant", &ExperimentSpec::eap_variant)
        .def_readwrite("instance", &ExperimentSpec::instance)
        .def_readwrite("threads", &ExperimentSpec::threads)
        .def_readwrite("out", &ExperimentSpec::out)
        .def("resolved", &ExperimentSpec::resolved)
        .def("validate", &ExperimentSpec::validate)
        .def("to_config", &ExperimentSpec::to_config);

    py::class_<RunResult>(m, "RunResult")
        .def_property_readonly("gbest", [](const RunResult& r) { return r.gbest.to_string(); })
        .def_readonly("gbest_fitness", &RunResult::gbest_fitness)
        .def_readonly("trace", &RunResult::trace)
        .def_readonly("successes", &RunResult::successes)
        .def_readonly("usage", &RunResult::usage)
        .def_readonly("replacements", &RunResult::replacements)
        .def_readonly("evaluations", &RunResult::evaluations)
        .def_readonly("scouts", &RunResult::scouts);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("spec", &ExperimentResult::spec)
        .def_readonly("runs", &ExperimentResult::runs)
        .def_readonly("records", &ExperimentResult::records);

    m.def(
        "run_experiment",
        [](const ExperimentSpec& spec) {
            py::gil_scoped_release release;
            return run_experiment(spec);
        },
        py::arg("spec"), "Runs the colonies in memory and returns runs and recorded cases.");
    m.def(
        "cmd_run",
        [](const ExperimentSpec& spec) {
            py::gil_scoped_release release;
            return cmd_run(spec);
        },
        py::arg("spec"), "Runs the colonies and writes cases.csv, success_table.csv and run.log.");
    m.def("cmd_gen_sukp",
          [](const std::string& path, std::size_t items, std::size_t elements, double density,
             double capacity_ratio, std::uint64_t seed) {
              cmd_gen_sukp({items, elements, density, capacity_ratio, seed}, path);
          },
          py::arg("path"), py::arg("items") = 500, py::arg("elements") = 500,
          py::arg("density") = 0.1, py::arg("capacity_ratio") = 0.5, py::arg("seed") = 1);

    m.def("export_csv", &export_csv, py::arg("records"), py::arg("path"),
          py::arg("with_success") = false);
    m.def("import_csv", &import_csv, py::arg("path"));
    m.def(
        "success_table_csv",
        [](const std::vector<CaseRecord>& records) {
            std::ostringstream out;
            write_success_table(success_table(records), out);
            return out.str();
        },
        py::arg("records"));
    m.def("records", &experiment_records, py::arg("spec"),
          "Shorthand for run_experiment(spec).records.");

    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
        return analysis::pearson(x, y);
    });
    m.def(
        "chi2_statistic",
        [](const std::vector<double>& feature, const std::vector<int>& labels, std::size_t bins) {
            return analysis::chi2_statistic(feature, labels, bins);
        },
        py::arg("feature"), py::arg("labels"), py::arg("bins") = 10);

    py::class_<analysis::PhaseReport>(m, "PhaseReport")
        .def_readonly("phase", &analysis::PhaseReport::phase)
        .def_readonly("rows", &analysis::PhaseReport::rows)
        .def_readonly("train_rows", &analysis::PhaseReport::train_rows)
        .def_readonly("test_rows", &analysis::PhaseReport::test_rows)
        .def_readonly("class_counts", &analysis::PhaseReport::class_counts)
        .def_readonly("dropped_classes", &analysis::PhaseReport::dropped_classes)
        .def_property_readonly("pearson",
                               [](const analysis::PhaseReport& p) {
                                   std::vector<std::vector<double>> rows(p.pearson.size);
                                   for (std::size_t i = 0; i < p.pearson.size; ++i) {
                                       for (std::size_t j = 0; j < p.pearson.size; ++j) {
                                           rows[i].push_back(p.pearson(i, j));
                                       }
                                   }
                                   return rows;
                               })
        .def_property_readonly("chi2", [](const analysis::PhaseReport& p) { return ranking_dict(p.chi2); })
        .def_property_readonly("forest_importance",
                               [](const analysis::PhaseReport& p) {
                                   return ranking_dict(p.forest_importance);
                               })
        .def_property_readonly("margin_importance",
                               [](const analysis::PhaseReport& p) {
                                   return ranking_dict(p.margin_importance);
                               })
        .def_readonly("forest_accuracy", &analysis::PhaseReport::forest_accuracy)
        .def_readonly("margin_accuracy", &analysis::PhaseReport::margin_accuracy)
        .def_readonly("perceptron_accuracy", &analysis::PhaseReport::perceptron_accuracy)
        .def_readonly("baseline", &analysis::PhaseReport::baseline);

    py::class_<analysis::AnalysisReport>(m, "AnalysisReport")
        .def_readonly("problem", &analysis::AnalysisReport::problem)
        .def_readonly("features", &analysis::AnalysisReport::features)
        .def_readonly("phases", &analysis::AnalysisReport::phases)
        .def("mean_forest", &analysis::AnalysisReport::mean_forest)
        .def("mean_margin", &analysis::AnalysisReport::mean_margin)
        .def("mean_perceptron", &analysis::AnalysisReport::mean_perceptron)
        .def("mean_baseline", &analysis::AnalysisReport::mean_baseline)
        .def("accuracy_csv", [](const analysis::AnalysisReport& r) { return analysis::accuracy_csv(r); })
        .def("accuracy_table",
             [](const analysis::AnalysisReport& r) { return analysis::format_accuracy_table(r); });

    auto params = [](std::uint64_t seed, double test_fraction, std::size_t bins,
                     std::size_t trees, std::size_t threads, std::size_t hidden,
                     std::size_t mlp_epochs, std::size_t margin_epochs, double lambda) {
        analysis::EvaluateParams p;
        p.seed = seed;
        p.test_fraction = test_fraction;
        p.chi2_bins = bins;
        p.forest.trees = trees;
        p.forest.threads = threads;
        p.perceptron.hidden = hidden;
        p.perceptron.epochs = mlp_epochs;
        p.margin.epochs = margin_epochs;
        p.margin.lambda = lambda;
        return p;
    };

    m.def(
        "evaluate",
        [params](const std::vector<CaseRecord>& records, std::uint64_t seed, double test_fraction,
                 std::size_t bins, std::size_t trees, std::size_t threads, std::size_t hidden,
                 std::size_t mlp_epochs, std::size_t margin_epochs, double lambda) {
            const auto p = params(seed, test_fraction, bins, trees, threads, hidden, mlp_epochs,
                                  margin_epochs, lambda);
            py::gil_scoped_release release;
            return analysis::evaluate(records, p);
        },
        py::arg("records"), py::kw_only(), py::arg("seed") = 1, py::arg("test_fraction") = 0.2,
        py::arg("bins") = 10, py::arg("trees") = 200, py::arg("threads") = 1,
        py::arg("hidden") = 32, py::arg("mlp_epochs") = 200, py::arg("margin_epochs") = 100,
        py::arg("lambda_") = 1e-4);
    m.def(
        "cmd_analyze",
        [params](const std::string& dataset, const std::string& out, std::uint64_t seed,
                 double test_fraction, std::size_t bins, std::size_t trees, std::size_t threads,
                 std::size_t hidden, std::size_t mlp_epochs, std::size_t margin_epochs,
                 double lambda, const std::string& problem) {
            const auto p = params(seed, test_fraction, bins, trees, threads, hidden, mlp_epochs,
                                  margin_epochs, lambda);
            py::gil_scoped_release release;
            return cmd_analyze(dataset, out, p, problem);
        },
        py::arg("dataset"), py::arg("out"), py::kw_only(), py::arg("seed") = 1,
        py::arg("test_fraction") = 0.2, py::arg("bins") = 10, py::arg("trees") = 200,
        py::arg("threads") = 1, py::arg("hidden") = 32, py::arg("mlp_epochs") = 200,
        py::arg("margin_epochs") = 100, py::arg("lambda_") = 1e-4, py::arg("problem") = "");
}
