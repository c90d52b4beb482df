#include "ratefix/factor_state.hpp"

#include <cmath>

#include "ratefix/errors.hpp"

namespace ratefix {

FactorState FactorState::ones(const std::vector<std::size_t>& dims) {
    FactorState f;
    f.blocks.reserve(dims.size());
    for (std::size_t d : dims) f.blocks.emplace_back(d, 1.0);
    return f;
}

std::size_t FactorState::total_size() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.size();
    return n;
}

bool FactorState::all_positive() const {
    for (const auto& b : blocks)
        for (double v : b)
            if (!(v > 0.0)) return false;
    return true;
}

std::vector<double> FactorState::flatten() const {
    std::vector<double> flat;
    flat.reserve(total_size());
    for (const auto& b : blocks) flat.insert(flat.end(), b.begin(), b.end());
    return flat;
}

FactorState FactorState::from_flat(const std::vector<double>& flat,
                                   const std::vector<std::size_t>& dims) {
    FactorState f;
    std::size_t pos = 0;
    for (std::size_t d : dims) {
        if (pos + d > flat.size())
            throw DimensionMismatch("FactorState::from_flat: vector too short for block shape");
        f.blocks.emplace_back(flat.begin() + pos, flat.begin() + pos + d);
        pos += d;
    }
    if (pos != flat.size())
        throw DimensionMismatch("FactorState::from_flat: vector longer than block shape");
    return f;
}

double max_abs_difference(const FactorState& a, const FactorState& b) {
    if (a.blocks.size() != b.blocks.size())
        throw DimensionMismatch("max_abs_difference: block count mismatch");
    double worst = 0.0;
    for (std::size_t t = 0; t < a.blocks.size(); ++t) {
        if (a.blocks[t].size() != b.blocks[t].size())
            throw DimensionMismatch("max_abs_difference: block length mismatch");
        for (std::size_t s = 0; s < a.blocks[t].size(); ++s)
            worst = std::max(worst, std::fabs(a.blocks[t][s] - b.blocks[t][s]));
    }
    return worst;
}

}  // namespace ratefix
