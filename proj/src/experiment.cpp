#include "flap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "flap/error.hpp"

namespace flap {

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

ExperimentSpec ExperimentSpec::resolved() const {
    ExperimentSpec s = *this;
    const bool sukp = s.problem == "sukp";
    if (s.dims == 0) {
        s.dims = sukp ? 500 : 1000;
    }
    if (s.iters == 0) {
        s.iters = sukp ? 500 : 150;
    }
    if (sukp && s.elements == 0) {
        s.elements = s.dims;
    }
    return s;
}

std::vector<OperatorId> parse_pool(const std::string& text) {
    std::vector<OperatorId> pool;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
        if (item.empty()) {
            continue;
        }
        long long id = -1;
        try {
            std::size_t used = 0;
            id = std::stoll(item, &used);
            if (used != item.size()) {
                id = -1;
            }
        } catch (const std::exception&) {
            id = -1;
        }
        if (id < 0) {
            throw ValidationError("pool: '" + item + "' is not an operator id");
        }
        pool.push_back(operator_from_index(id));
    }
    if (pool.empty()) {
        throw ValidationError("pool: at least one operator id is required");
    }
    return pool;
}

EapVariant parse_eap_variant(const std::string& text) {
    if (text == "literal") {
        return EapVariant::Literal;
    }
    if (text == "sigma-divided") {
        return EapVariant::SigmaDivided;
    }
    throw ValidationError("eap-variant must be 'literal' or 'sigma-divided'");
}

void ExperimentSpec::validate() const {
    if (problem != "onemax" && problem != "sukp") {
        throw ValidationError("problem must be 'onemax' or 'sukp'");
    }
    if (runs == 0) {
        throw ValidationError("runs must be at least 1");
    }
    if (colony < 2) {
        throw ValidationError("colony must be at least 2");
    }
    if (limit < 1) {
        throw ValidationError("limit must be at least 1");
    }
    const auto r = resolved();
    if (r.iters < 3) {
        throw ValidationError("iters must be at least 3");
    }
    if (problem == "sukp" && instance.empty()) {
        if (!(density > 0.0 && density <= 1.0)) {
            throw ValidationError("density must lie in (0, 1]");
        }
        if (!(capacity_ratio > 0.0 && capacity_ratio < 1.0)) {
            throw ValidationError("capacity-ratio must lie in (0, 1)");
        }
    }
    parse_pool(pool);
    parse_eap_variant(eap_variant);
}

std::string ExperimentSpec::to_config() const {
    const auto s = resolved();
    std::ostringstream out;
    out << "problem=" << s.problem << '\n'
        << "dims=" << s.dims << '\n'
        << "iters=" << s.iters << '\n';
    if (s.problem == "sukp") {
        if (!s.instance.empty()) {
            out << "instance=" << s.instance.string() << '\n';
        } else {
            out << "elements=" << s.elements << '\n'
                << "density=" << shortest(s.density) << '\n'
                << "capacity-ratio=" << shortest(s.capacity_ratio) << '\n'
                << "instance-seed=" << s.instance_seed << '\n';
        }
    }
    out << "runs=" << s.runs << '\n'
        << "colony=" << s.colony << '\n'
        << "limit=" << s.limit << '\n'
        << "seed=" << s.seed << '\n'
        << "pool=\"" << s.pool << "\"\n"
        << "record-failures=" << (s.record_failures ? "true" : "false") << '\n'
        << "eap-variant=" << s.eap_variant << '\n';
    return out.str();
}

std::shared_ptr<const Problem> make_problem(const ExperimentSpec& spec) {
    const auto s = spec.resolved();
    if (s.problem == "onemax") {
        return std::make_shared<OneMaxProblem>(s.dims);
    }
    if (!s.instance.empty()) {
        return std::make_shared<SukpProblem>(load_sukp(s.instance));
    }
    SukpGenerator gen;
    gen.items = s.dims;
    gen.elements = s.elements;
    gen.density = s.density;
    gen.capacity_ratio = s.capacity_ratio;
    gen.seed = s.instance_seed;
    return std::make_shared<SukpProblem>(generate_sukp(gen));
}

ExperimentResult run_experiment(const ExperimentSpec& input) {
    input.validate();
    ExperimentResult result;
    result.spec = input.resolved();
    const auto& spec = result.spec;
    const auto problem = make_problem(spec);
    result.spec.dims = problem->dimension();
    const auto pool = parse_pool(spec.pool);
    const auto variant = parse_eap_variant(spec.eap_variant);

    result.runs.resize(spec.runs);
    std::vector<std::vector<CaseRecord>> buffers(spec.runs);

    auto execute = [&](std::size_t i) {
        RunConfig config;
        config.problem = problem;
        config.colony_size = spec.colony;
        config.max_iter = spec.iters;
        config.limit = spec.limit;
        config.seed = spec.seed + i;
        config.run_id = static_cast<std::uint32_t>(i);
        config.pool = pool;
        config.record_failures = spec.record_failures;
        config.eap_variant = variant;
        auto& buffer = buffers[i];
        result.runs[i] = run(config, [&buffer](const CaseRecord& r) { buffer.push_back(r); });
    };

    const std::size_t workers = std::clamp<std::size_t>(spec.threads, 1, spec.runs);
    if (workers == 1) {
        for (std::size_t i = 0; i < spec.runs; ++i) {
            execute(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < spec.runs; i = next++) {
                        execute(i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) {
            t.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    for (auto& buffer : buffers) {
        result.records.insert(result.records.end(), std::make_move_iterator(buffer.begin()),
                              std::make_move_iterator(buffer.end()));
    }
    return result;
}

void ensure_writable_directory(const std::filesystem::path& dir) {
    if (dir.empty()) {
        throw IoError("no output directory given");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    const auto probe = dir / ".flap-write-probe";
    {
        std::ofstream out(probe, std::ios::binary);
        if (!out || !(out << "ok")) {
            throw IoError("output directory '" + dir.string() + "' is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace

ExperimentResult cmd_run(const ExperimentSpec& spec) {
    spec.validate();
    ensure_writable_directory(spec.out);
    auto result = run_experiment(spec);
    if (result.records.empty()) {
        throw ValidationError("runs produced no cases; nothing to export");
    }
    export_csv(result.records, spec.out / "cases.csv", result.spec.record_failures);

    std::ostringstream table;
    write_success_table(success_table(result.records), table);
    write_text(spec.out / "success_table.csv", table.str());

    std::ostringstream log;
    log << "# flap run\n" << result.spec.to_config();
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto& r = result.runs[i];
        log << "# run " << i << " seed=" << result.spec.seed + i
            << " initial=" << r.trace.front() << " final=" << r.gbest_fitness
            << " replacements=" << r.replacements << " evaluations=" << r.evaluations
            << " scouts=" << r.scouts << '\n';
    }
    log << "# cases=" << result.records.size() << '\n';
    write_text(spec.out / "run.log", log.str());
    return result;
}

analysis::AnalysisReport cmd_analyze(const std::filesystem::path& dataset,
                                     const std::filesystem::path& out,
                                     const analysis::EvaluateParams& params,
                                     const std::string& problem) {
    ensure_writable_directory(out);
    auto records = import_csv(dataset);
    if (!problem.empty()) {
        std::erase_if(records, [&](const CaseRecord& r) { return r.problem != problem; });
    }
    std::erase_if(records, [](const CaseRecord& r) { return !r.success; });
    if (records.empty()) {
        throw ValidationError("dataset '" + dataset.string() + "' has no successful cases");
    }
    auto report = analysis::evaluate(records, params);
    analysis::write_report(report, out);
    return report;
}

void cmd_gen_sukp(const SukpGenerator& params, const std::filesystem::path& path) {
    const auto instance = generate_sukp(params);
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    save_sukp(instance, path);
}

} // namespace flap
