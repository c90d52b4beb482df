#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ratefix/factor_state.hpp"
#include "ratefix/risk_tensor.hpp"

namespace ratefix {

/// Multiplicative rating problem: a loss tensor, an exposure tensor of the
/// same shape, and the permissible loss ratio. The base cell is the all-zeros
/// multi-index; inputs must already be permuted so the base cell is first.
///
/// Strict mode (default) rejects at construction:
///   - any zero exposure cell,
///   - zero total loss in any base slice,
///   - zero total loss in any non-base slice (its indicated relativity would
///     be 0, outside the positive domain).
/// Non-strict mode admits such data; operations that hit a zero denominator
/// throw at call time, and certificates are unavailable.
class RatingProblem {
public:
    RatingProblem(RiskTensor losses, RiskTensor exposures, double plr, bool strict = true,
                  std::optional<double> current_base_rate = std::nullopt);

    const RiskTensor& losses() const { return losses_; }
    const RiskTensor& exposures() const { return exposures_; }
    double plr() const { return plr_; }
    bool strict() const { return strict_; }
    std::optional<double> current_base_rate() const { return current_base_rate_; }

    std::size_t factor_count() const { return losses_.rank(); }
    const std::vector<std::size_t>& dims() const { return losses_.dims(); }

    /// True when every exposure cell is positive; the convergence
    /// certificates require this.
    bool exposures_all_positive() const { return exposures_all_positive_; }

    /// Throws DimensionMismatch unless `f` has one block per factor with
    /// matching lengths, InvalidArgument unless all entries are positive.
    void require_compatible(const FactorState& f) const;

private:
    RiskTensor losses_;
    RiskTensor exposures_;
    double plr_;
    bool strict_;
    std::optional<double> current_base_rate_;
    bool exposures_all_positive_;
};

/// Total loss of each slice along `factor`: entry s sums losses over all
/// cells whose coordinate on that axis is s.
std::vector<double> slice_losses(const RatingProblem& problem, std::size_t factor);

/// Exposure slice sums weighted by the product of all *other* factors'
/// relativities at each cell.
std::vector<double> adjusted_exposures(const RatingProblem& problem, const FactorState& factors,
                                       std::size_t factor);

/// Elementwise slice_losses / adjusted_exposures (loss costs corrected for
/// slice heterogeneity).
std::vector<double> adjusted_loss_costs(const RatingProblem& problem, const FactorState& factors,
                                        std::size_t factor);

/// One simultaneous sweep of the re-rating formulas: every block is the
/// vector of adjusted loss costs divided by its base entry, computed from the
/// *input* factors. The base entry of each output block is the literal
/// constant 1.
FactorState indicated_factors(const RatingProblem& problem, const FactorState& factors);

/// Indicated base rate: total loss over PLR, divided by the factor-weighted
/// exposure sum.
double indicated_base_rate(const RatingProblem& problem, const FactorState& indicated);

/// Rate tensor base_rate * prod_t factors[t][i_t]; axis names are taken from
/// the problem's loss tensor when available.
RiskTensor assemble_rates(double base_rate, const FactorState& factors);

}  // namespace ratefix
