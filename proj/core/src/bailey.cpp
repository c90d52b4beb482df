#include "ratefix/bailey.hpp"

#include <algorithm>
#include <cmath>

#include "ratefix/errors.hpp"

namespace ratefix {

BaileyProblem::BaileyProblem(std::size_t rows, std::size_t cols, std::vector<double> loss_costs,
                             std::vector<double> weights)
    : rows_(rows), cols_(cols), r_(std::move(loss_costs)), w_(std::move(weights)) {
    if (rows_ == 0 || cols_ == 0) throw InvalidArgument("BaileyProblem: empty grid");
    if (r_.size() != rows_ * cols_ || w_.size() != rows_ * cols_)
        throw DimensionMismatch("BaileyProblem: value counts do not match the grid");
    for (double v : r_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidArgument("BaileyProblem: loss costs must be finite and non-negative");
    for (double v : w_)
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidArgument("BaileyProblem: exposures must be finite and positive");
}

double BaileyProblem::bias_scale() const {
    double worst = 0.0;
    for (std::size_t c = 0; c < r_.size(); ++c) worst = std::max(worst, w_[c] * r_[c]);
    return worst;
}

std::pair<std::vector<double>, std::vector<double>> bailey_residuals(
    const BaileyProblem& problem, std::span<const double> x, std::span<const double> y) {
    if (x.size() != problem.rows() || y.size() != problem.cols())
        throw DimensionMismatch("bailey_residuals: factor lengths do not match the grid");
    std::vector<double> row_bias(problem.rows(), 0.0);
    std::vector<double> col_bias(problem.cols(), 0.0);
    for (std::size_t i = 0; i < problem.rows(); ++i)
        for (std::size_t j = 0; j < problem.cols(); ++j) {
            double term = problem.w(i, j) * (problem.r(i, j) - x[i] * y[j]);
            row_bias[i] += term;
            col_bias[j] += term;
        }
    return {std::move(row_bias), std::move(col_bias)};
}

IterationTrace bailey_iterate(const BaileyProblem& problem, std::span<const double> x0,
                              std::span<const double> y0, const IterationSettings& settings) {
    if (x0.size() != problem.rows() || y0.size() != problem.cols())
        throw DimensionMismatch("bailey_iterate: start lengths do not match the grid");
    for (double v : x0)
        if (!(v > 0.0)) throw InvalidArgument("bailey_iterate: start must be positive");
    for (double v : y0)
        if (!(v > 0.0)) throw InvalidArgument("bailey_iterate: start must be positive");

    const std::size_t m = problem.rows(), n = problem.cols();
    double scale = problem.bias_scale();
    if (!(scale > 0.0)) scale = 1.0;  // all-zero loss costs: absolute bias

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> y(y0.begin(), y0.end());

    IterationTrace trace;
    trace.iterates.push_back(FactorState({x, y}));
    for (std::size_t step = 0; step < settings.max_iters; ++step) {
        for (std::size_t i = 0; i < m; ++i) {
            double num = 0.0, den = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                num += problem.w(i, j) * problem.r(i, j);
                den += problem.w(i, j) * y[j];
            }
            if (!(den > 0.0)) throw ZeroDenominator("bailey_iterate: zero row denominator");
            x[i] = num / den;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                num += problem.w(i, j) * problem.r(i, j);
                den += problem.w(i, j) * x[i];
            }
            if (!(den > 0.0)) throw ZeroDenominator("bailey_iterate: zero column denominator");
            y[j] = num / den;
        }

        auto [row_bias, col_bias] = bailey_residuals(problem, x, y);
        double bias = 0.0;
        for (double v : row_bias) bias = std::max(bias, std::fabs(v));
        for (double v : col_bias) bias = std::max(bias, std::fabs(v));
        double res = bias / scale;

        trace.iterates.push_back(FactorState({x, y}));
        trace.residuals.push_back(res);
        trace.iterations_used = step + 1;
        if (res <= settings.tolerance) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

std::pair<std::vector<double>, std::vector<double>> normalize_bailey(std::span<const double> x,
                                                                     std::span<const double> y) {
    if (x.empty() || !(x[0] > 0.0))
        throw InvalidArgument("normalize_bailey: first row relativity must be positive");
    std::vector<double> xs(x.begin(), x.end());
    std::vector<double> ys(y.begin(), y.end());
    double anchor = xs[0];
    for (double& v : xs) v /= anchor;
    xs[0] = 1.0;
    for (double& v : ys) v *= anchor;
    return {std::move(xs), std::move(ys)};
}

}  // namespace ratefix
