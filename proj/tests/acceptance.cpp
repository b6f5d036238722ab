// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   flap_acceptance [work-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "feature_oracle.hpp"
#include "flap/abc.hpp"
#include "flap/analysis/forest.hpp"
#include "flap/analysis/perceptron.hpp"
#include "flap/analysis/report.hpp"
#include "flap/analysis/statistics.hpp"
#include "flap/experiment.hpp"
#include "random_snapshot.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace flap;
using namespace flap::analysis;

namespace {

constexpr double kFeatureTolerance = 1e-9;
constexpr double kFeatureBudgetSeconds = 10.0;
constexpr double kEngineBudgetSeconds = 30.0;
constexpr double kEngineFinalFitness = 90.0;
constexpr double kEngineSuccessShare = 0.9;
constexpr double kPearsonTolerance = 1e-12;
constexpr double kGradientTolerance = 1e-4;
constexpr double kForestMargin = 0.10;
constexpr double kClassifierBudgetSeconds = 15 * 60.0;
constexpr std::size_t kNoiseBottom = 3;
constexpr double kReferenceForestOneMax = 0.83;
constexpr double kReferenceForestSukp = 0.77;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) {
        out.push_back(field);
    }
    return out;
}

std::string fmt(const char* format, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, a);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Harness {
  public:
    void check(const std::string& name, const std::function<Outcome()>& body) {
        Outcome o;
        const auto start = Clock::now();
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << fmt("%.1f", seconds_since(start))
                  << " s): " << o.detail << std::endl;
        failures_ += o.pass ? 0 : 1;
    }
    int failures() const { return failures_; }

  private:
    int failures_ = 0;
};

/// Counts every evaluation and every infeasible solution it is asked to score.
class AuditedProblem final : public Problem {
  public:
    explicit AuditedProblem(std::shared_ptr<const SukpProblem> inner) : inner_(std::move(inner)) {}
    std::string tag() const override { return inner_->tag(); }
    std::size_t dimension() const override { return inner_->dimension(); }
    double evaluate(const BitString& x) const override {
        ++evaluations;
        if (!inner_->feasible(x)) {
            ++infeasible;
            return 0.0;
        }
        return inner_->evaluate(x);
    }
    BitString repair(BitString x, Rng& rng) const override { return inner_->repair(std::move(x), rng); }
    bool feasible(const BitString& x) const override { return inner_->feasible(x); }

    mutable std::size_t evaluations = 0;
    mutable std::size_t infeasible = 0;

  private:
    std::shared_ptr<const SukpProblem> inner_;
};

Outcome feature_oracle() {
    const auto start = Clock::now();
    Rng rng(20240601);
    double worst = 0.0;
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto rc = testing_support::random_case(rng, 6, 10);
        for (auto variant : {EapVariant::Literal, EapVariant::SigmaDivided}) {
            const auto lib = testing_support::library_features(rc, variant);
            const auto ref =
                oracle::features(rc.raw, rc.raw_move, variant == EapVariant::SigmaDivided);
            for (std::size_t k = 0; k < kFeatureCount; ++k) {
                const double err = std::abs(lib[k] - ref[k]) / std::max(1.0, std::abs(ref[k]));
                worst = std::max(worst, err);
                bad += static_cast<std::size_t>(!(err <= kFeatureTolerance));
            }
        }
    }
    const double t = seconds_since(start);
    return {bad == 0 && t < kFeatureBudgetSeconds,
            "1000 snapshots x 2 eap variants x 19 features, max rel err " + fmt("%.2e", worst) +
                ", mismatches " + std::to_string(bad) + ", " + fmt("%.2f", t) + " s (limit " +
                fmt("%.0f", kFeatureBudgetSeconds) + " s)"};
}

Outcome determinism(const fs::path& work, const ExperimentSpec& onemax_spec) {
    auto a = onemax_spec;
    a.out = work / "determinism_a";
    auto b = onemax_spec;
    b.out = work / "determinism_b";
    cmd_run(a);
    cmd_run(b);
    const auto ha = slurp(a.out / "cases.csv");
    const bool same_csv = !ha.empty() && ha == slurp(b.out / "cases.csv");

    const auto records = import_csv(a.out / "cases.csv");
    const auto data = from_records(records, 1);
    const auto split = stratified_split(data.labels, 0.2, 3);
    const auto train = data.subset(split.train);
    const auto test = data.subset(split.test);
    ForestParams serial;
    serial.trees = 60;
    serial.seed = 11;
    auto parallel = serial;
    parallel.threads = 4;
    const auto ps = RandomForest::fit(train, serial).predict(test);
    const auto pp = RandomForest::fit(train, parallel).predict(test);
    const bool same_forest = ps == pp;
    return {same_csv && same_forest,
            std::string("cases.csv ") + (same_csv ? "byte-identical" : "DIFFERS") + " (" +
                std::to_string(ha.size()) + " bytes); forest 1 vs 4 threads predictions " +
                (same_forest ? "identical" : "DIFFER") + " on " + std::to_string(test.rows()) +
                " rows"};
}

Outcome engine_sanity() {
    const auto start = Clock::now();
    const auto problem = std::make_shared<OneMaxProblem>(100);
    std::size_t monotone = 0, good = 0;
    double lo = 1e9, hi = 0, sum = 0;
    const int seeds = 20;
    for (int s = 1; s <= seeds; ++s) {
        RunConfig c;
        c.problem = problem;
        c.colony_size = 20;
        c.max_iter = 150;
        c.seed = std::uint64_t(s);
        const auto r = run(c);
        bool mono = true;
        for (std::size_t i = 1; i < r.trace.size(); ++i) {
            mono = mono && r.trace[i] >= r.trace[i - 1];
        }
        monotone += std::size_t(mono);
        good += std::size_t(r.gbest_fitness >= kEngineFinalFitness);
        lo = std::min(lo, r.gbest_fitness);
        hi = std::max(hi, r.gbest_fitness);
        sum += r.gbest_fitness;
    }
    const double t = seconds_since(start);
    const double share = double(good) / seeds;
    return {monotone == std::size_t(seeds) && share >= kEngineSuccessShare &&
                t < kEngineBudgetSeconds,
            "D=100 N=20 150 iters: monotone " + std::to_string(monotone) + "/20, final >= 90 in " +
                std::to_string(good) + "/20 (final min " + fmt("%.0f", lo) + ", mean " +
                fmt("%.1f", sum / seeds) + ", max " + fmt("%.0f", hi) + "), " + fmt("%.2f", t) +
                " s"};
}

Outcome sukp_feasibility(const fs::path& work) {
    const auto inner = std::make_shared<SukpProblem>(generate_sukp({500, 500, 0.1, 0.5, 1}));
    const auto audited = std::make_shared<AuditedProblem>(inner);
    RunConfig c;
    c.problem = audited;
    c.max_iter = 500;
    std::vector<CaseRecord> records;
    const auto result = run(c, [&records](const CaseRecord& r) { records.push_back(r); });
    const auto path = work / "sukp_feasibility.csv";
    export_csv(records, path);
    std::size_t non_finite = 0;
    for (const auto& r : import_csv(path)) {
        for (double v : r.features) {
            non_finite += std::size_t(!std::isfinite(v));
        }
        non_finite += std::size_t(!std::isfinite(r.parent_fitness));
        non_finite += std::size_t(!std::isfinite(r.child_fitness));
    }
    const auto text = slurp(path);
    const bool textual = text.find("nan") == std::string::npos &&
                         text.find("inf") == std::string::npos;
    const bool ok = audited->infeasible == 0 && audited->evaluations == result.evaluations &&
                    non_finite == 0 && textual;
    return {ok, "m=500 500 iters: " + std::to_string(audited->evaluations) +
                    " evaluations, infeasible " + std::to_string(audited->infeasible) + "; " +
                    std::to_string(records.size()) + " exported cases, non-finite values " +
                    std::to_string(non_finite) + (textual ? "" : ", nan/inf text present")};
}

Outcome statistics_oracles() {
    std::vector<std::string> notes;
    bool ok = true;
    const std::vector<double> a{1, 2, 3}, b{3, 2, 1};
    const double r1 = pearson(a, a), rm1 = pearson(a, b);
    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 5, 4};
    const double r = pearson(x, y);
    // Hand computation: covariance sum 3.5, sum of squares 5 and 4.75.
    const double expected = 3.5 / std::sqrt(5.0 * 4.75);
    ok = ok && std::abs(r1 - 1) <= kPearsonTolerance && std::abs(rm1 + 1) <= kPearsonTolerance &&
         std::abs(r - expected) <= kPearsonTolerance;
    notes.push_back("pearson 1/" + fmt("%.0f", rm1) + "/" + fmt("%.12f", r));

    const std::vector<double> f{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const double chi = chi2_statistic(f, labels, 2);
    ok = ok && chi == 10.0;
    notes.push_back("chi2 " + fmt("%.17g", chi) + " (n=10)");

    auto data = testing_support::blobs(8, 5);
    Perceptron net(3, 8, 4, 9);
    const auto grad = net.gradient(data);
    Rng pick(10);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const std::size_t i = pick.index(net.parameters().size());
        const double saved = net.parameters()[i];
        const double h = 1e-6;
        net.parameters()[i] = saved + h;
        const double up = net.loss(data);
        net.parameters()[i] = saved - h;
        const double down = net.loss(data);
        net.parameters()[i] = saved;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
        worst = std::max(worst, std::abs(numeric - grad[i]) / scale);
    }
    ok = ok && worst < kGradientTolerance;
    notes.push_back("gradient max rel err " + fmt("%.2e", worst));
    return {ok, notes[0] + "; " + notes[1] + "; " + notes[2]};
}

struct FullScale {
    AnalysisReport onemax;
    AnalysisReport sukp;
    fs::path onemax_dir;
    fs::path sukp_dir;
    double seconds = 0.0;
};

Outcome classifier_floor(const FullScale& ps) {
    bool ok = true;
    std::ostringstream out;
    for (const auto* report : {&ps.onemax, &ps.sukp}) {
        out << report->problem << " [";
        for (const auto& ph : report->phases) {
            const bool floor = ph.forest_accuracy >= ph.baseline &&
                               ph.margin_accuracy >= ph.baseline &&
                               ph.perceptron_accuracy >= ph.baseline;
            const bool margin = ph.forest_accuracy >= ph.baseline + kForestMargin;
            ok = ok && floor && margin;
            out << "p" << ph.phase << " rf " << fmt("%.3f", ph.forest_accuracy) << " svm "
                << fmt("%.3f", ph.margin_accuracy) << " mlp "
                << fmt("%.3f", ph.perceptron_accuracy) << " base " << fmt("%.3f", ph.baseline)
                << (floor && margin ? "" : " BELOW") << (ph.phase < 3 ? "; " : "");
        }
        const double reference =
            report == &ps.onemax ? kReferenceForestOneMax : kReferenceForestSukp;
        out << "] forest mean " << fmt("%.3f", report->mean_forest()) << " vs reference "
            << fmt("%.2f", reference) << "; ";
    }
    ok = ok && ps.seconds < kClassifierBudgetSeconds;
    out << "runs + analysis " << fmt("%.0f", ps.seconds) << " s";
    return {ok, out.str()};
}

bool close(const std::string& text, double value, double tol) {
    return std::abs(std::stod(text) - value) <= tol;
}

Outcome report_shape(const FullScale& ps) {
    std::vector<std::string> problems;
    bool ok = true;
    for (const auto& [dir, report] :
         {std::pair{ps.onemax_dir, &ps.onemax}, std::pair{ps.sukp_dir, &ps.sukp}}) {
        const auto acc = lines_of(slurp(dir / "analysis" / "accuracy.csv"));
        bool acc_ok = acc.size() == 5 && acc[0] == "phase,forest,margin,perceptron";
        for (std::size_t k = 1; acc_ok && k <= 4; ++k) {
            const auto f = split(acc[k]);
            acc_ok = f.size() == 4 && f[0] == (k == 4 ? "mean" : std::to_string(k));
        }
        for (std::size_t c = 1; acc_ok && c <= 3; ++c) {
            const double mean = (std::stod(split(acc[1])[c]) + std::stod(split(acc[2])[c]) +
                                 std::stod(split(acc[3])[c])) / 3;
            acc_ok = close(split(acc[4])[c], mean, 2e-6);
        }

        const auto table = lines_of(slurp(dir / "success_table.csv"));
        bool table_ok = table.size() == 5 && table[0] == "problem,op,phase_1,phase_2,phase_3,mean";
        for (std::size_t k = 1; table_ok && k <= 4; ++k) {
            const auto f = split(table[k]);
            table_ok = f.size() == 6 && f[0] == report->problem && f[1] == std::to_string(k - 1);
            if (table_ok) {
                const double mean = (std::stod(f[2]) + std::stod(f[3]) + std::stod(f[4])) / 3;
                table_ok = close(f[5], mean, 0.005);
            }
        }
        ok = ok && acc_ok && table_ok;
        problems.push_back(report->problem + ": accuracy.csv " + (acc_ok ? "ok" : "BAD") +
                           ", success_table.csv " + (table_ok ? "ok" : "BAD"));
    }
    SuccessTable t;
    t.counts["onemax"][0] = {306, 375, 357};
    std::ostringstream s;
    write_success_table(t, s);
    const bool reference_row = lines_of(s.str())[1] == "onemax,0,306,375,357,346.00";
    ok = ok && reference_row;
    return {ok, problems[0] + "; " + problems[1] + "; (306,375,357) -> " +
                    split(lines_of(s.str())[1])[5]};
}

Outcome noise_ranking(const FullScale& ps) {
    const auto records = import_csv(ps.onemax_dir / "cases.csv");
    std::array<DataMatrix, 3> phases;
    Rng noise(424242);
    for (int k = 0; k < 3; ++k) {
        phases[k] = from_records(records, k + 1);
        std::vector<double> column(phases[k].rows());
        for (auto& v : column) {
            v = noise.uniform();
        }
        phases[k].add_column("noise", column);
    }
    const std::size_t noise_index = kFeatureCount;
    const std::size_t width = kFeatureCount + 1;
    bool ok = true;
    std::ostringstream out;
    for (int k = 0; k < 3; ++k) {
        const auto chi = chi2_rank(phases[k], 10);
        const auto split = stratified_split(phases[k].labels, 0.2, Rng::derive(5, std::uint64_t(k)));
        ForestParams params;
        params.seed = 5;
        const auto forest = RandomForest::fit(phases[k].subset(split.train), params);
        const auto imp = forest.importance();
        const std::size_t rc = chi.rank_of(noise_index);
        const std::size_t rf = imp.rank_of(noise_index);
        ok = ok && rc + kNoiseBottom > width && rf + kNoiseBottom > width;
        out << "phase " << k + 1 << " noise rank chi2 " << rc << "/" << width << ", forest "
            << rf << "/" << width << (k < 2 ? "; " : "");
    }
    return {ok, out.str()};
}

} // namespace

int main(int argc, char** argv) {
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "flap_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    Harness h;

    ExperimentSpec onemax;
    onemax.problem = "onemax";
    onemax.runs = 10;
    onemax.seed = 7;

    h.check("feature-oracle-equivalence", feature_oracle);
    h.check("determinism", [&] { return determinism(work, onemax); });
    h.check("engine-sanity", engine_sanity);
    h.check("sukp-feasibility", [&] { return sukp_feasibility(work); });
    h.check("statistics-oracles", statistics_oracles);

    FullScale ps;
    std::string setup_error;
    try {
        const auto start = Clock::now();
        ps.onemax_dir = work / "onemax";
        ps.sukp_dir = work / "sukp";
        auto om = onemax;
        om.out = ps.onemax_dir;
        cmd_run(om);
        ExperimentSpec sukp;
        sukp.problem = "sukp";
        sukp.runs = 10;
        sukp.seed = 7;
        sukp.out = ps.sukp_dir;
        cmd_run(sukp);
        ps.onemax = cmd_analyze(ps.onemax_dir / "cases.csv", ps.onemax_dir / "analysis");
        ps.sukp = cmd_analyze(ps.sukp_dir / "cases.csv", ps.sukp_dir / "analysis");
        ps.seconds = seconds_since(start);
    } catch (const std::exception& e) {
        setup_error = e.what();
    }
    auto needs_data = [&](Outcome (*body)(const FullScale&)) {
        return [&, body] {
            if (!setup_error.empty()) {
                return Outcome{false, "full-scale pipeline failed: " + setup_error};
            }
            return body(ps);
        };
    };
    h.check("classifier-floor", needs_data(classifier_floor));
    h.check("report-shape-parity", needs_data(report_shape));
    h.check("importance-noise-ranking", needs_data(noise_ranking));

    std::cout << (h.failures() == 0 ? "ALL PASS" : std::to_string(h.failures()) + " FAILED")
              << std::endl;
    return h.failures() == 0 ? 0 : 1;
}
