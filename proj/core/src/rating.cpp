#include "ratefix/rating.hpp"

#include <cmath>
#include <string>

#include "ratefix/errors.hpp"

namespace ratefix {

namespace {

std::string cell_name(const RiskTensor& t, std::size_t flat) {
    std::string s = "(";
    for (std::size_t a = 0; a < t.rank(); ++a) {
        if (a) s += ",";
        s += std::to_string(t.coordinate(flat, a));
    }
    return s + ")";
}

}  // namespace

RatingProblem::RatingProblem(RiskTensor losses, RiskTensor exposures, double plr, bool strict,
                             std::optional<double> current_base_rate)
    : losses_(std::move(losses)),
      exposures_(std::move(exposures)),
      plr_(plr),
      strict_(strict),
      current_base_rate_(current_base_rate) {
    if (losses_.dims() != exposures_.dims())
        throw DimensionMismatch("RatingProblem: loss and exposure shapes differ");
    if (!(plr_ > 0.0) || !std::isfinite(plr_))
        throw InvalidArgument("RatingProblem: permissible loss ratio must be positive");
    if (current_base_rate_ && !(*current_base_rate_ > 0.0))
        throw InvalidArgument("RatingProblem: current base rate must be positive");

    // Exposure to risk is a necessary condition for loss.
    for (std::size_t flat = 0; flat < losses_.size(); ++flat)
        if (losses_[flat] > 0.0 && !(exposures_[flat] > 0.0))
            throw ZeroExposure("RatingProblem: cell " + cell_name(losses_, flat) +
                               " has positive loss but zero exposure; exposure to risk is a "
                               "necessary condition for loss");

    exposures_all_positive_ = exposures_.all_positive();
    if (strict_ && !exposures_all_positive_) {
        for (std::size_t flat = 0; flat < exposures_.size(); ++flat)
            if (!(exposures_[flat] > 0.0))
                throw ZeroExposure("RatingProblem: zero exposure at cell " +
                                   cell_name(exposures_, flat) +
                                   " (strict mode; merge slices or pass strict=false)");
    }

    if (strict_) {
        for (std::size_t axis = 0; axis < losses_.rank(); ++axis) {
            std::vector<double> sl(losses_.dim(axis), 0.0);
            for (std::size_t flat = 0; flat < losses_.size(); ++flat)
                sl[losses_.coordinate(flat, axis)] += losses_[flat];
            if (!(sl[0] > 0.0))
                throw ZeroBaseSliceLoss("RatingProblem: base slice of factor " +
                                        losses_.axis_names()[axis] + " has zero total loss");
            for (std::size_t s = 1; s < sl.size(); ++s)
                if (!(sl[s] > 0.0))
                    throw ZeroSliceLoss("RatingProblem: slice " + std::to_string(s) +
                                        " of factor " + losses_.axis_names()[axis] +
                                        " has zero total loss; its indicated relativity "
                                        "would be 0 (strict mode)");
        }
    }
}

void RatingProblem::require_compatible(const FactorState& f) const {
    if (f.block_count() != factor_count())
        throw DimensionMismatch("FactorState: expected " + std::to_string(factor_count()) +
                                " blocks, got " + std::to_string(f.block_count()));
    for (std::size_t t = 0; t < f.block_count(); ++t)
        if (f.blocks[t].size() != dims()[t])
            throw DimensionMismatch("FactorState: block " + std::to_string(t) + " has length " +
                                    std::to_string(f.blocks[t].size()) + ", expected " +
                                    std::to_string(dims()[t]));
    if (!f.all_positive())
        throw InvalidArgument("FactorState: all relativities must be positive");
}

std::vector<double> slice_losses(const RatingProblem& problem, std::size_t factor) {
    const RiskTensor& L = problem.losses();
    if (factor >= L.rank()) throw InvalidArgument("slice_losses: factor index out of range");
    std::vector<double> out(L.dim(factor), 0.0);
    // Fixed row-major accumulation order for reproducibility.
    for (std::size_t flat = 0; flat < L.size(); ++flat)
        out[L.coordinate(flat, factor)] += L[flat];
    return out;
}

std::vector<double> adjusted_exposures(const RatingProblem& problem, const FactorState& factors,
                                       std::size_t factor) {
    const RiskTensor& E = problem.exposures();
    if (factor >= E.rank()) throw InvalidArgument("adjusted_exposures: factor index out of range");
    problem.require_compatible(factors);

    std::vector<double> out(E.dim(factor), 0.0);
    const std::size_t rank = E.rank();
    for (std::size_t flat = 0; flat < E.size(); ++flat) {
        double w = E[flat];
        for (std::size_t t = 0; t < rank; ++t) {
            if (t == factor) continue;
            w *= factors.blocks[t][E.coordinate(flat, t)];
        }
        out[E.coordinate(flat, factor)] += w;
    }
    return out;
}

std::vector<double> adjusted_loss_costs(const RatingProblem& problem, const FactorState& factors,
                                        std::size_t factor) {
    std::vector<double> losses = slice_losses(problem, factor);
    std::vector<double> exposures = adjusted_exposures(problem, factors, factor);
    const std::string& name = problem.losses().axis_names()[factor];
    if (!(losses[0] > 0.0))
        throw ZeroBaseSliceLoss("adjusted_loss_costs: base slice of factor " + name +
                                " has zero total loss");
    std::vector<double> out(losses.size());
    for (std::size_t s = 0; s < losses.size(); ++s) {
        if (!(exposures[s] > 0.0))
            throw ZeroExposure("adjusted_loss_costs: adjusted exposure of slice " +
                               std::to_string(s) + " of factor " + name + " is zero");
        out[s] = losses[s] / exposures[s];
    }
    return out;
}

FactorState indicated_factors(const RatingProblem& problem, const FactorState& factors) {
    FactorState out;
    out.blocks.reserve(problem.factor_count());
    for (std::size_t t = 0; t < problem.factor_count(); ++t) {
        std::vector<double> costs = adjusted_loss_costs(problem, factors, t);
        std::vector<double> block(costs.size());
        block[0] = 1.0;  // self-quotient pinned exactly
        for (std::size_t s = 1; s < costs.size(); ++s) block[s] = costs[s] / costs[0];
        out.blocks.push_back(std::move(block));
    }
    return out;
}

double indicated_base_rate(const RatingProblem& problem, const FactorState& indicated) {
    problem.require_compatible(indicated);
    const RiskTensor& E = problem.exposures();
    double weighted = 0.0;
    for (std::size_t flat = 0; flat < E.size(); ++flat) {
        double w = E[flat];
        for (std::size_t t = 0; t < E.rank(); ++t)
            w *= indicated.blocks[t][E.coordinate(flat, t)];
        weighted += w;
    }
    if (!(weighted > 0.0))
        throw ZeroDenominator("indicated_base_rate: factor-weighted exposure sum is zero");
    return problem.losses().total() / problem.plr() / weighted;
}

RiskTensor assemble_rates(double base_rate, const FactorState& factors) {
    if (!(base_rate > 0.0)) throw InvalidArgument("assemble_rates: base rate must be positive");
    if (!factors.all_positive())
        throw InvalidArgument("assemble_rates: all relativities must be positive");
    std::vector<std::size_t> dims;
    dims.reserve(factors.block_count());
    for (const auto& b : factors.blocks) dims.push_back(b.size());

    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t a = dims.size(); a-- > 1;) strides[a - 1] = strides[a] * dims[a];

    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    std::vector<double> values(n);
    for (std::size_t flat = 0; flat < n; ++flat) {
        double r = base_rate;
        for (std::size_t t = 0; t < dims.size(); ++t)
            r *= factors.blocks[t][(flat / strides[t]) % dims[t]];
        values[flat] = r;
    }
    return RiskTensor(std::move(dims), std::move(values));
}

}  // namespace ratefix
