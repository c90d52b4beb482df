#pragma once

#include <cstddef>
#include <vector>

namespace ratefix {

/// Concatenated relativity vector: one block of positive reals per rating
/// factor. Block t has the length of axis t of the rating problem. A
/// normalized state has first entry 1 in every block.
struct FactorState {
    std::vector<std::vector<double>> blocks;

    FactorState() = default;
    explicit FactorState(std::vector<std::vector<double>> b) : blocks(std::move(b)) {}

    /// All-ones state for the given block lengths.
    static FactorState ones(const std::vector<std::size_t>& dims);

    std::size_t block_count() const { return blocks.size(); }

    /// Total number of coordinates across blocks.
    std::size_t total_size() const;

    bool all_positive() const;

    /// Blocks concatenated into one vector (x; y; z; ...).
    std::vector<double> flatten() const;

    /// Inverse of flatten() for the given block lengths.
    static FactorState from_flat(const std::vector<double>& flat,
                                 const std::vector<std::size_t>& dims);
};

/// Coordinatewise max |a - b|; states must have identical shapes.
double max_abs_difference(const FactorState& a, const FactorState& b);

}  // namespace ratefix
