#include "flap/analysis/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "flap/error.hpp"
#include "flap/rng.hpp"

namespace flap::analysis {

namespace {

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

double mean_of(const std::vector<PhaseReport>& phases, double PhaseReport::*field) {
    if (phases.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& p : phases) {
        sum += p.*field;
    }
    return sum / static_cast<double>(phases.size());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string ranking_csv(const ImportanceRanking& r) {
    std::ostringstream out;
    out << "rank,feature,score,raw\n";
    for (std::size_t i = 0; i < r.order.size(); ++i) {
        const auto f = r.order[i];
        out << i + 1 << ',' << r.names[f] << ',' << fixed(r.scores[f]) << ','
            << fixed(r.raw[f], 9) << '\n';
    }
    return out.str();
}

std::string pearson_csv(const SquareMatrix& m, const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "feature";
    for (const auto& n : names) {
        out << ',' << n;
    }
    out << '\n';
    for (std::size_t i = 0; i < m.size; ++i) {
        out << names[i];
        for (std::size_t j = 0; j < m.size; ++j) {
            out << ',' << fixed(m(i, j));
        }
        out << '\n';
    }
    return out.str();
}

} // namespace

double AnalysisReport::mean_forest() const { return mean_of(phases, &PhaseReport::forest_accuracy); }
double AnalysisReport::mean_margin() const { return mean_of(phases, &PhaseReport::margin_accuracy); }
double AnalysisReport::mean_perceptron() const {
    return mean_of(phases, &PhaseReport::perceptron_accuracy);
}
double AnalysisReport::mean_baseline() const { return mean_of(phases, &PhaseReport::baseline); }

PhaseReport evaluate_phase(int phase, const DataMatrix& input, const EvaluateParams& params) {
    if (input.rows() == 0) {
        throw ValidationError("phase " + std::to_string(phase) + " has no cases");
    }
    PhaseReport report;
    report.phase = phase;

    std::map<int, std::size_t> counts;
    for (int y : input.labels) {
        ++counts[y];
    }
    std::vector<std::size_t> keep;
    for (const auto& [label, count] : counts) {
        if (count < 2) {
            report.dropped_classes.push_back(label);
        }
    }
    for (std::size_t r = 0; r < input.rows(); ++r) {
        if (counts[input.labels[r]] >= 2) {
            keep.push_back(r);
        }
    }
    const DataMatrix data = report.dropped_classes.empty() ? input : input.subset(keep);
    data.validate();
    if (data.classes().size() < 2) {
        throw ValidationError("phase " + std::to_string(phase) +
                              " has fewer than two classes with at least two cases");
    }
    report.rows = data.rows();
    report.class_counts.assign(std::max<std::size_t>(data.label_slots(), kOperatorCount), 0);
    for (int y : data.labels) {
        ++report.class_counts[static_cast<std::size_t>(y)];
    }

    const auto phase_seed = Rng::derive(params.seed, static_cast<std::uint64_t>(phase));
    report.pearson = pearson_matrix(data);
    report.chi2 = chi2_rank(data, params.chi2_bins);

    const auto split = stratified_split(data.labels, params.test_fraction, phase_seed);
    const DataMatrix train = data.subset(split.train);
    const DataMatrix test = data.subset(split.test);
    report.train_rows = train.rows();
    report.test_rows = test.rows();
    report.baseline = majority_baseline(train.labels, test.labels);

    auto forest_params = params.forest;
    forest_params.seed = Rng::derive(phase_seed, 1);
    const auto forest = RandomForest::fit(train, forest_params);
    report.forest_accuracy = accuracy(forest.predict(test), test.labels);
    report.forest_importance = forest.importance();

    auto [train_z, test_z] = zscore_fit_apply(train, test);

    auto margin_params = params.margin;
    margin_params.seed = Rng::derive(phase_seed, 2);
    const auto margin = MarginClassifier::fit(train_z, margin_params);
    report.margin_accuracy = accuracy(margin.predict(test_z), test_z.labels);
    report.margin_importance = margin.coefficients();

    auto perceptron_params = params.perceptron;
    perceptron_params.seed = Rng::derive(phase_seed, 3);
    const auto net = Perceptron::fit(train_z, report.class_counts.size(), perceptron_params);
    report.perceptron_accuracy = accuracy(net.predict(test_z), test_z.labels);
    return report;
}

AnalysisReport evaluate(const std::string& problem, const std::array<DataMatrix, 3>& phases,
                        const EvaluateParams& params) {
    AnalysisReport report;
    report.problem = problem;
    for (std::size_t k = 0; k < phases.size(); ++k) {
        if (phases[k].rows() == 0) {
            throw ValidationError("phase " + std::to_string(k + 1) + " has no cases");
        }
    }
    report.features = phases[0].names;
    for (std::size_t k = 0; k < phases.size(); ++k) {
        report.phases.push_back(evaluate_phase(static_cast<int>(k + 1), phases[k], params));
    }
    return report;
}

AnalysisReport evaluate(const std::vector<CaseRecord>& records, const EvaluateParams& params) {
    std::set<std::string> problems;
    for (const auto& r : records) {
        problems.insert(r.problem);
    }
    if (problems.size() > 1) {
        throw ValidationError("dataset mixes several problems; analyse them separately");
    }
    std::array<DataMatrix, 3> phases;
    for (int k = 1; k <= 3; ++k) {
        phases[static_cast<std::size_t>(k - 1)] = from_records(records, k);
    }
    return evaluate(problems.empty() ? std::string{} : *problems.begin(), phases, params);
}

std::string accuracy_csv(const AnalysisReport& report) {
    std::ostringstream out;
    out << "phase,forest,margin,perceptron\n";
    for (const auto& p : report.phases) {
        out << p.phase << ',' << fixed(p.forest_accuracy) << ',' << fixed(p.margin_accuracy)
            << ',' << fixed(p.perceptron_accuracy) << '\n';
    }
    out << "mean," << fixed(report.mean_forest()) << ',' << fixed(report.mean_margin()) << ','
        << fixed(report.mean_perceptron()) << '\n';
    return out.str();
}

std::string format_accuracy_table(const AnalysisReport& report) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %8s %8s %11s %9s\n", "", "Forest", "Margin",
                  "Perceptron", "Baseline");
    out << buf;
    for (const auto& p : report.phases) {
        std::snprintf(buf, sizeof(buf), "Phase %-4d %8.2f %8.2f %11.2f %9.2f\n", p.phase,
                      p.forest_accuracy, p.margin_accuracy, p.perceptron_accuracy, p.baseline);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%-10s %8.2f %8.2f %11.2f %9.2f\n", "Mean",
                  report.mean_forest(), report.mean_margin(), report.mean_perceptron(),
                  report.mean_baseline());
    out << buf;
    return out.str();
}

void write_report(const AnalysisReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    }
    std::ostringstream long_form;
    long_form << "phase,method,feature,score,rank\n";
    for (const auto& p : report.phases) {
        const std::string k = std::to_string(p.phase);
        write_file(dir / ("pearson_phase" + k + ".csv"), pearson_csv(p.pearson, report.features));
        write_file(dir / ("chi2_phase" + k + ".csv"), ranking_csv(p.chi2));
        write_file(dir / ("importance_forest_phase" + k + ".csv"),
                   ranking_csv(p.forest_importance));
        write_file(dir / ("importance_margin_phase" + k + ".csv"),
                   ranking_csv(p.margin_importance));
        for (const auto* r : {&p.chi2, &p.forest_importance, &p.margin_importance}) {
            for (std::size_t f = 0; f < r->names.size(); ++f) {
                long_form << p.phase << ',' << r->method << ',' << r->names[f] << ','
                          << fixed(r->scores[f]) << ',' << r->rank_of(f) << '\n';
            }
        }
    }
    write_file(dir / "importance_long.csv", long_form.str());
    write_file(dir / "accuracy.csv", accuracy_csv(report));

    std::ostringstream text;
    text << "problem: " << (report.problem.empty() ? "-" : report.problem) << "\n\n";
    for (const auto& p : report.phases) {
        text << "phase " << p.phase << ": " << p.rows << " cases (train " << p.train_rows
             << ", test " << p.test_rows << "), per operator:";
        for (std::size_t c = 0; c < p.class_counts.size(); ++c) {
            text << " OP" << c << "=" << p.class_counts[c];
        }
        if (!p.dropped_classes.empty()) {
            text << " [dropped classes with <2 cases:";
            for (int c : p.dropped_classes) {
                text << ' ' << c;
            }
            text << ']';
        }
        text << '\n';
    }
    text << "\nTest accuracy\n" << format_accuracy_table(report) << '\n';
    for (const auto& p : report.phases) {
        text << "Top features, phase " << p.phase << '\n';
        for (const auto* r : {&p.chi2, &p.forest_importance, &p.margin_importance}) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "  %-7s", r->method.c_str());
            text << buf;
            for (std::size_t i = 0; i < std::min<std::size_t>(5, r->order.size()); ++i) {
                text << ' ' << r->names[r->order[i]];
            }
            text << '\n';
        }
    }
    write_file(dir / "report.txt", text.str());
}

} // namespace flap::analysis
