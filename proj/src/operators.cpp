#include "flap/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "flap/error.hpp"

namespace flap {

OperatorId operator_from_index(long long id) {
    if (id < 0 || id >= static_cast<long long>(kOperatorCount)) {
        throw ValidationError("unknown operator id " + std::to_string(id));
    }
    return static_cast<OperatorId>(id);
}

std::string_view operator_name(OperatorId id) {
    switch (id) {
    case OperatorId::Flip:
        return "flip";
    case OperatorId::NeighborMix:
        return "neighbor-mix";
    case OperatorId::BestGuided:
        return "best-guided";
    case OperatorId::DistanceFlip:
        return "distance-flip";
    }
    throw ValidationError("unknown operator id " + std::to_string(static_cast<int>(id)));
}

namespace {

void check_lengths(const OperatorContext& ctx) {
    if (ctx.parent.empty() || ctx.neighbor.size() != ctx.parent.size() ||
        ctx.gbest.size() != ctx.parent.size()) {
        throw ValidationError("operator context: solutions must be non-empty and of equal length");
    }
}

BitString mix_toward(const BitString& donor, const OperatorContext& ctx) {
    const std::size_t d = ctx.parent.size();
    std::vector<std::size_t> differing;
    for (std::size_t i = 0; i < d; ++i) {
        if (ctx.parent[i] != donor[i]) {
            differing.push_back(i);
        }
    }
    if (differing.empty()) {
        return flip_mutation(ctx);
    }
    BitString child(ctx.parent);
    bool changed = false;
    for (auto i : differing) {
        if (ctx.rng.bernoulli(0.5)) {
            child.set(i, donor[i]);
            changed = true;
        }
    }
    if (!changed) {
        const auto i = differing[ctx.rng.index(differing.size())];
        child.set(i, donor[i]);
    }
    return child;
}

} // namespace

BitString flip_mutation(const OperatorContext& ctx) {
    check_lengths(ctx);
    const std::size_t d = ctx.parent.size();
    const double rate = 1.0 / static_cast<double>(d);
    BitString child(ctx.parent);
    bool changed = false;
    for (std::size_t i = 0; i < d; ++i) {
        if (ctx.rng.bernoulli(rate)) {
            child.flip(i);
            changed = true;
        }
    }
    if (!changed) {
        child.flip(ctx.rng.index(d));
    }
    return child;
}

BitString neighbor_mix(const OperatorContext& ctx) {
    check_lengths(ctx);
    return mix_toward(ctx.neighbor, ctx);
}

BitString best_guided_mix(const OperatorContext& ctx) {
    check_lengths(ctx);
    return mix_toward(ctx.gbest, ctx);
}

BitString distance_flip(const OperatorContext& ctx) {
    check_lengths(ctx);
    const std::size_t d = ctx.parent.size();
    const std::size_t distance = hamming(ctx.parent, ctx.neighbor);
    std::size_t k = 1;
    if (distance > 0) {
        const double u = ctx.rng.uniform_open_closed();
        k = static_cast<std::size_t>(std::ceil(u * static_cast<double>(distance)));
        k = std::clamp<std::size_t>(k, 1, distance);
    }
    // Partial Fisher-Yates: the first k entries become a uniform k-subset.
    std::vector<std::size_t> positions(d);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    BitString child(ctx.parent);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + ctx.rng.index(d - i);
        std::swap(positions[i], positions[j]);
        child.flip(positions[i]);
    }
    return child;
}

BitString apply_operator(OperatorId id, const OperatorContext& ctx) {
    switch (id) {
    case OperatorId::Flip:
        return flip_mutation(ctx);
    case OperatorId::NeighborMix:
        return neighbor_mix(ctx);
    case OperatorId::BestGuided:
        return best_guided_mix(ctx);
    case OperatorId::DistanceFlip:
        return distance_flip(ctx);
    }
    throw ValidationError("unknown operator id " + std::to_string(static_cast<int>(id)));
}

BitString apply_operator(OperatorId id, const OperatorContext& ctx, const Problem& problem) {
    return problem.repair(apply_operator(id, ctx), ctx.rng);
}

} // namespace flap
