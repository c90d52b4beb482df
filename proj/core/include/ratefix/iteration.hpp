#pragma once

#include <cstddef>
#include <vector>

#include "ratefix/factor_state.hpp"
#include "ratefix/rating.hpp"

namespace ratefix {

/// Norm used for successive-iterate residuals.
enum class ResidualNorm { One, Infinity };

struct IterationSettings {
    double tolerance = 1e-10;
    std::size_t max_iters = 10'000;
    ResidualNorm norm = ResidualNorm::Infinity;

    static IterationSettings rating_defaults() { return {}; }

    /// Leslie-Gower runs converge slowly near growth 1; use a tighter
    /// tolerance and a larger iteration budget.
    static IterationSettings lg_defaults() { return {1e-12, 100'000, ResidualNorm::Infinity}; }
};

/// Full record of a fixed-point run. iterates[0] is the initial state,
/// residuals[k] = norm(iterates[k+1] - iterates[k]).
struct IterationTrace {
    std::vector<FactorState> iterates;
    std::vector<double> residuals;
    bool converged = false;
    std::size_t iterations_used = 0;

    const FactorState& last() const { return iterates.back(); }
};

double residual_norm(const FactorState& a, const FactorState& b, ResidualNorm norm);

/// One simultaneous sweep of the re-rating system: every block is updated
/// from the previous iterate. Identical to indicated_factors by construction.
FactorState phi(const RatingProblem& problem, const FactorState& f);

/// Applies phi until the successive-iterate residual drops to the tolerance
/// or the iteration budget is exhausted. Non-convergence is reported in the
/// trace, not thrown.
IterationTrace iterate(const RatingProblem& problem, const FactorState& f0,
                       const IterationSettings& settings = {});

/// norm(phi(f) - f): zero exactly at a fixed point.
double fixed_point_residual(const RatingProblem& problem, const FactorState& f,
                            ResidualNorm norm = ResidualNorm::Infinity);

}  // namespace ratefix
