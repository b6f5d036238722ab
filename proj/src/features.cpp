#include "flap/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flap/error.hpp"

namespace flap {

PopulationSnapshot PopulationSnapshot::build(std::vector<BitString> parents,
                                             std::vector<BitString> children,
                                             std::vector<double> parent_fitness,
                                             std::vector<double> child_fitness, BitString gbest,
                                             double gbest_fitness,
                                             std::vector<std::size_t> trials,
                                             std::size_t trial_max) {
    PopulationSnapshot s;
    s.parents = std::move(parents);
    s.children = std::move(children);
    s.parent_fitness = std::move(parent_fitness);
    s.child_fitness = std::move(child_fitness);
    s.gbest = std::move(gbest);
    s.gbest_fitness = gbest_fitness;
    s.trials = std::move(trials);
    s.trial_max = trial_max;
    if (!s.parent_fitness.empty() && s.parents.size() == s.parent_fitness.size()) {
        const auto best = std::max_element(s.parent_fitness.begin(), s.parent_fitness.end());
        const auto worst = std::min_element(s.parent_fitness.begin(), s.parent_fitness.end());
        s.pbest = s.parents[static_cast<std::size_t>(best - s.parent_fitness.begin())];
        s.pworst = s.parents[static_cast<std::size_t>(worst - s.parent_fitness.begin())];
    }
    s.validate();
    return s;
}

void PopulationSnapshot::validate() const {
    const std::size_t n = parents.size();
    if (n == 0 || children.size() != n || parent_fitness.size() != n ||
        child_fitness.size() != n || trials.size() != n) {
        throw ValidationError("snapshot: parent/child/fitness/trial arrays must share length N > 0");
    }
    const std::size_t d = gbest.size();
    if (d == 0 || pbest.size() != d || pworst.size() != d) {
        throw ValidationError("snapshot: reference solutions must share a positive length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (parents[i].size() != d || children[i].size() != d) {
            throw ValidationError("snapshot: all solutions must have length D");
        }
    }
    if (trial_max == 0) {
        throw ValidationError("snapshot: trial_max must be positive");
    }
    if (gbest_fitness < *std::max_element(parent_fitness.begin(), parent_fitness.end())) {
        throw ValidationError("snapshot: gbest fitness below the best parent fitness");
    }
}

double average_trials(const PopulationSnapshot& s) {
    const double total = std::accumulate(s.trials.begin(), s.trials.end(), 0.0,
                                         [](double acc, std::size_t t) { return acc + double(t); });
    return total / static_cast<double>(s.size());
}

PopulationFeatures population_features(const PopulationSnapshot& s, EapVariant variant) {
    s.validate();
    const std::size_t n = s.size();
    if (n < 2) {
        throw ValidationError("population features need at least two parents");
    }
    const double nn = static_cast<double>(n);
    const double dd = static_cast<double>(s.dimension());
    const double pairs = nn * (nn - 1.0) / 2.0;

    double distance_sum = 0.0;
    double fitness_gap_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            distance_sum += static_cast<double>(hamming(s.parents[i], s.parents[j]));
            fitness_gap_sum += std::abs(s.parent_fitness[i] - s.parent_fitness[j]);
        }
    }

    const double max_parent = *std::max_element(s.parent_fitness.begin(), s.parent_fitness.end());
    const double max_child = *std::max_element(s.child_fitness.begin(), s.child_fitness.end());

    std::size_t improved = 0;
    std::size_t beat_gbest = 0;
    double relative_gain = 0.0;
    double ability = 0.0;
    double convergence = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fp = s.parent_fitness[i];
        const double fc = s.child_fitness[i];
        if (fc > fp) {
            ++improved;
            relative_gain += fc != 0.0 ? (fc - fp) / fc : 0.0;
            ability += std::abs(max_parent - fc);
        }
        if (fc > s.gbest_fitness) {
            ++beat_gbest;
        }
        convergence += static_cast<double>(hamming(s.gbest, s.parents[i])) -
                       static_cast<double>(hamming(s.gbest, s.children[i]));
    }

    const double mean_fp =
        std::accumulate(s.parent_fitness.begin(), s.parent_fitness.end(), 0.0) / nn;
    double var = 0.0;
    for (double f : s.parent_fitness) {
        var += (f - mean_fp) * (f - mean_fp);
    }
    const double sigma = std::sqrt(var / nn);

    // Diameter over every pair drawn from parents and children together.
    std::size_t diameter = 0;
    std::vector<const BitString*> pool;
    pool.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        pool.push_back(&s.parents[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        pool.push_back(&s.children[i]);
    }
    for (std::size_t i = 0; i < pool.size() && diameter < s.dimension(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            diameter = std::max(diameter, hamming(*pool[i], *pool[j]));
        }
    }

    PopulationFeatures f{};
    f[feature::psd] = distance_sum / (dd * pairs);
    f[feature::pfd] = fitness_gap_sum / pairs;
    f[feature::pnb] = static_cast<double>(improved) / nn;
    f[feature::pic] = static_cast<double>(beat_gbest) / nn;
    f[feature::pai] = relative_gain / nn;
    f[feature::pcv] = max_parent != 0.0 ? (max_child - max_parent) / max_parent : 0.0;
    f[feature::pcr] = convergence / nn / dd;
    if (sigma == 0.0) {
        f[feature::eap] = 0.0;
    } else if (variant == EapVariant::Literal) {
        f[feature::eap] = sigma * ability / nn;
    } else {
        f[feature::eap] = ability / (sigma * nn);
    }
    f[feature::evp] = f[feature::eap] * f[feature::pic];
    f[feature::atn] = average_trials(s) / static_cast<double>(s.trial_max);
    f[feature::pdd] = static_cast<double>(diameter) / dd;
    return f;
}

IndividualFeatures individual_features(const MoveRecord& move, const PopulationSnapshot& s) {
    const double dd = static_cast<double>(s.dimension());
    const double fstar = s.gbest_fitness;
    const double fp = move.parent_fitness;
    const double fc = move.child_fitness;

    IndividualFeatures f{};
    f[feature::idg - kPopulationFeatureCount] = double(hamming(s.gbest, move.parent)) / dd;
    f[feature::idp - kPopulationFeatureCount] = double(hamming(move.parent, move.child)) / dd;
    f[feature::ifg - kPopulationFeatureCount] = fstar != 0.0 ? (fstar - fc) / fstar : 0.0;
    f[feature::ifp - kPopulationFeatureCount] = fc != 0.0 ? (fc - fp) / fc : 0.0;
    f[feature::idb - kPopulationFeatureCount] = double(hamming(s.pbest, move.parent)) / dd;
    f[feature::idw - kPopulationFeatureCount] = double(hamming(s.pworst, move.parent)) / dd;
    f[feature::itn - kPopulationFeatureCount] = double(move.trial) / double(s.trial_max);
    f[feature::osr - kPopulationFeatureCount] =
        move.op_total > 0 ? double(move.op_success) / double(move.op_total) : 0.0;
    return f;
}

FeatureVector feature_vector(const PopulationFeatures& population,
                             const IndividualFeatures& individual) {
    FeatureVector out{};
    std::copy(population.begin(), population.end(), out.begin());
    std::copy(individual.begin(), individual.end(), out.begin() + kPopulationFeatureCount);
    return out;
}

FeatureVector feature_vector(const PopulationSnapshot& s, const MoveRecord& move,
                             EapVariant variant) {
    return feature_vector(population_features(s, variant), individual_features(move, s));
}

} // namespace flap
