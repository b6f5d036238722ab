#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "flap/bitstring.hpp"
#include "flap/problems.hpp"
#include "flap/rng.hpp"

namespace flap {

/// Stable operator ids; they are the class labels of every exported case.
enum class OperatorId : std::uint8_t {
    Flip = 0,
    NeighborMix = 1,
    BestGuided = 2,
    DistanceFlip = 3,
};

inline constexpr std::size_t kOperatorCount = 4;

inline constexpr std::array<OperatorId, kOperatorCount> kAllOperators = {
    OperatorId::Flip, OperatorId::NeighborMix, OperatorId::BestGuided, OperatorId::DistanceFlip};

/// Throws ValidationError unless 0 <= id < 4.
OperatorId operator_from_index(long long id);

constexpr std::size_t index_of(OperatorId id) { return static_cast<std::size_t>(id); }

std::string_view operator_name(OperatorId id);

/// Inputs of one neighbourhood move. Operators never modify the referenced
/// solutions; only the generator state advances.
struct OperatorContext {
    const BitString& parent;
    const BitString& neighbor;
    const BitString& gbest;
    Rng& rng;
};

/// Flips each bit with probability 1/D, forcing one flip when none occurred.
BitString flip_mutation(const OperatorContext& ctx);

/// Copies each bit where the neighbour differs with probability 1/2.
BitString neighbor_mix(const OperatorContext& ctx);

/// Same mixing rule with the global best as donor.
BitString best_guided_mix(const OperatorContext& ctx);

/// Flips k distinct positions, k = ceil(u * d) with u ~ U(0, 1] and
/// d = H(parent, neighbor); k = 1 when d = 0.
BitString distance_flip(const OperatorContext& ctx);

BitString apply_operator(OperatorId id, const OperatorContext& ctx);

/// Applies the operator, then maps the result onto the problem's feasible set.
BitString apply_operator(OperatorId id, const OperatorContext& ctx, const Problem& problem);

} // namespace flap
