#include "ratefix/risk_tensor.hpp"

#include <algorithm>
#include <cmath>

#include "ratefix/errors.hpp"

namespace ratefix {

namespace {

std::size_t checked_product(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw InvalidArgument("RiskTensor: every axis extent must be >= 1");
        n *= d;
    }
    return n;
}

}  // namespace

RiskTensor::RiskTensor(std::vector<std::size_t> dims, std::vector<double> values,
                       std::vector<std::string> axis_names)
    : dims_(std::move(dims)), values_(std::move(values)), axis_names_(std::move(axis_names)) {
    if (dims_.size() < 2)
        throw InvalidArgument("RiskTensor: need at least two axes, got " +
                              std::to_string(dims_.size()));
    if (values_.size() != checked_product(dims_))
        throw DimensionMismatch("RiskTensor: value count " + std::to_string(values_.size()) +
                                " does not match shape product " +
                                std::to_string(checked_product(dims_)));
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidArgument("RiskTensor: values must be finite and non-negative");
    if (axis_names_.empty()) {
        axis_names_.reserve(dims_.size());
        for (std::size_t a = 0; a < dims_.size(); ++a)
            axis_names_.push_back("axis" + std::to_string(a));
    }
    if (axis_names_.size() != dims_.size())
        throw DimensionMismatch("RiskTensor: axis name count does not match rank");

    strides_.assign(dims_.size(), 1);
    for (std::size_t a = dims_.size(); a-- > 1;)
        strides_[a - 1] = strides_[a] * dims_[a];
}

RiskTensor RiskTensor::constant(std::vector<std::size_t> dims, double value,
                                std::vector<std::string> axis_names) {
    std::size_t n = checked_product(dims);
    return RiskTensor(std::move(dims), std::vector<double>(n, value), std::move(axis_names));
}

std::size_t RiskTensor::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != dims_.size())
        throw DimensionMismatch("RiskTensor: index rank does not match tensor rank");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        if (index[a] >= dims_[a])
            throw InvalidArgument("RiskTensor: index out of range on axis " + std::to_string(a));
        flat += index[a] * strides_[a];
    }
    return flat;
}

double RiskTensor::at(std::span<const std::size_t> index) const {
    return values_[flat_index(index)];
}

double RiskTensor::total() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
}

double RiskTensor::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double RiskTensor::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

bool RiskTensor::all_positive() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

void RiskTensor::swap_slice_to_front(std::size_t axis, std::size_t index) {
    if (axis >= dims_.size())
        throw InvalidArgument("RiskTensor: axis out of range");
    if (index >= dims_[axis])
        throw InvalidArgument("RiskTensor: slice index out of range on axis " +
                              std::to_string(axis));
    if (index == 0) return;
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        // Visit each swapped pair once, from its coordinate-0 member.
        if (coordinate(flat, axis) != 0) continue;
        std::size_t other = flat + index * strides_[axis];
        std::swap(values_[flat], values_[other]);
    }
}

}  // namespace ratefix
