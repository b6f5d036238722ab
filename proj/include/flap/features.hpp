#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "flap/bitstring.hpp"

namespace flap {

inline constexpr std::size_t kPopulationFeatureCount = 11;
inline constexpr std::size_t kIndividualFeatureCount = 8;
inline constexpr std::size_t kFeatureCount = kPopulationFeatureCount + kIndividualFeatureCount;

/// Column order used by every export.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "psd", "pfd", "pnb", "pic", "pai", "pcv", "pcr", "eap", "evp", "atn",
    "pdd", "idg", "idp", "ifg", "ifp", "idb", "idw", "itn", "osr"};

namespace feature {
enum Index : std::size_t {
    psd, pfd, pnb, pic, pai, pcv, pcr, eap, evp, atn, pdd,
    idg, idp, ifg, ifp, idb, idw, itn, osr
};
} // namespace feature

using FeatureVector = std::array<double, kFeatureCount>;
using PopulationFeatures = std::array<double, kPopulationFeatureCount>;
using IndividualFeatures = std::array<double, kIndividualFeatureCount>;

/// How the evolutionary-ability sum is scaled by the parent fitness
/// standard deviation: multiplied (as printed) or divided.
enum class EapVariant { Literal, SigmaDivided };

/// Parents, their children and the iteration-level references the features
/// are measured against.
struct PopulationSnapshot {
    std::vector<BitString> parents;
    std::vector<BitString> children;
    std::vector<double> parent_fitness;
    std::vector<double> child_fitness;
    BitString gbest;
    double gbest_fitness = 0.0;
    BitString pbest;
    BitString pworst;
    std::vector<std::size_t> trials;
    std::size_t trial_max = 1;

    /// Fills pbest/pworst from the parents (first best / first worst).
    static PopulationSnapshot build(std::vector<BitString> parents,
                                    std::vector<BitString> children,
                                    std::vector<double> parent_fitness,
                                    std::vector<double> child_fitness, BitString gbest,
                                    double gbest_fitness, std::vector<std::size_t> trials,
                                    std::size_t trial_max);

    std::size_t size() const noexcept { return parents.size(); }
    std::size_t dimension() const noexcept { return gbest.size(); }

    /// Checks array lengths, bit-string lengths and f(x*) >= max F^p.
    void validate() const;
};

/// Mean trial count before normalisation by trial_max.
double average_trials(const PopulationSnapshot& s);

/// The eleven population-level features; requires at least two parents.
PopulationFeatures population_features(const PopulationSnapshot& s,
                                       EapVariant variant = EapVariant::Literal);

/// One move, described relative to the snapshot's references.
struct MoveRecord {
    const BitString& parent;
    const BitString& child;
    double parent_fitness;
    double child_fitness;
    std::size_t trial;
    std::size_t op_success;
    std::size_t op_total;
};

IndividualFeatures individual_features(const MoveRecord& move, const PopulationSnapshot& s);

FeatureVector feature_vector(const PopulationFeatures& population,
                             const IndividualFeatures& individual);

FeatureVector feature_vector(const PopulationSnapshot& s, const MoveRecord& move,
                             EapVariant variant = EapVariant::Literal);

} // namespace flap
