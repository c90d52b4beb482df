#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ratefix {

/// Dense non-negative N-dimensional array with named axes, stored flat in
/// row-major order (last axis fastest). Holds either losses or exposures.
///
/// Invariants enforced at construction: N >= 2 axes, every extent >= 1,
/// values.size() == product of extents, every value finite and >= 0.
class RiskTensor {
public:
    RiskTensor(std::vector<std::size_t> dims, std::vector<double> values,
               std::vector<std::string> axis_names = {});

    /// Tensor of the given shape filled with one value.
    static RiskTensor constant(std::vector<std::size_t> dims, double value,
                               std::vector<std::string> axis_names = {});

    std::size_t rank() const { return dims_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t dim(std::size_t axis) const { return dims_[axis]; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::string>& axis_names() const { return axis_names_; }

    double operator[](std::size_t flat) const { return values_[flat]; }
    double at(std::span<const std::size_t> index) const;

    /// Row-major stride of an axis (elements skipped per unit step).
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }

    /// Coordinate of a flat offset along one axis.
    std::size_t coordinate(std::size_t flat, std::size_t axis) const {
        return (flat / strides_[axis]) % dims_[axis];
    }

    std::size_t flat_index(std::span<const std::size_t> index) const;

    double total() const;
    double min_value() const;
    double max_value() const;
    bool all_positive() const;

    /// Swaps slice `index` with slice 0 along `axis` (used to move a chosen
    /// base cell to the front).
    void swap_slice_to_front(std::size_t axis, std::size_t index);

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::vector<double> values_;
    std::vector<std::string> axis_names_;
};

}  // namespace ratefix
