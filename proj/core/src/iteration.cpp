#include "ratefix/iteration.hpp"

#include <cmath>

#include "ratefix/errors.hpp"

namespace ratefix {

double residual_norm(const FactorState& a, const FactorState& b, ResidualNorm norm) {
    if (a.blocks.size() != b.blocks.size())
        throw DimensionMismatch("residual_norm: block count mismatch");
    double acc = 0.0;
    for (std::size_t t = 0; t < a.blocks.size(); ++t) {
        if (a.blocks[t].size() != b.blocks[t].size())
            throw DimensionMismatch("residual_norm: block length mismatch");
        for (std::size_t s = 0; s < a.blocks[t].size(); ++s) {
            double d = std::fabs(a.blocks[t][s] - b.blocks[t][s]);
            if (norm == ResidualNorm::One)
                acc += d;
            else
                acc = std::max(acc, d);
        }
    }
    return acc;
}

FactorState phi(const RatingProblem& problem, const FactorState& f) {
    return indicated_factors(problem, f);
}

IterationTrace iterate(const RatingProblem& problem, const FactorState& f0,
                       const IterationSettings& settings) {
    problem.require_compatible(f0);
    if (!(settings.tolerance > 0.0)) throw InvalidArgument("iterate: tolerance must be positive");
    if (settings.max_iters == 0) throw InvalidArgument("iterate: max_iters must be >= 1");

    IterationTrace trace;
    trace.iterates.push_back(f0);
    for (std::size_t step = 0; step < settings.max_iters; ++step) {
        FactorState next = phi(problem, trace.iterates.back());
        double res = residual_norm(next, trace.iterates.back(), settings.norm);
        trace.iterates.push_back(std::move(next));
        trace.residuals.push_back(res);
        trace.iterations_used = step + 1;
        if (res <= settings.tolerance) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

double fixed_point_residual(const RatingProblem& problem, const FactorState& f,
                            ResidualNorm norm) {
    return residual_norm(phi(problem, f), f, norm);
}

}  // namespace ratefix
