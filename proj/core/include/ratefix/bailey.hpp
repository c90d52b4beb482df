#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ratefix/iteration.hpp"

namespace ratefix {

/// Two-variable minimum-bias fit: observed loss costs r and earned exposures
/// w over an m x n grid of cells, both row-major.
class BaileyProblem {
public:
    BaileyProblem(std::size_t rows, std::size_t cols, std::vector<double> loss_costs,
                  std::vector<double> weights);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double r(std::size_t i, std::size_t j) const { return r_[i * cols_ + j]; }
    double w(std::size_t i, std::size_t j) const { return w_[i * cols_ + j]; }

    /// max_ij w_ij * r_ij; the natural scale of the bias sums.
    double bias_scale() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> r_;
    std::vector<double> w_;
};

/// The two exposure-weighted bias sums: entry i of the first vector is
/// sum_j w_ij (r_ij - x_i y_j), entry j of the second the column analogue.
/// Both vanish at a minimum-bias solution.
std::pair<std::vector<double>, std::vector<double>> bailey_residuals(
    const BaileyProblem& problem, std::span<const double> x, std::span<const double> y);

/// Alternating per-equation solves
///   x_i <- sum_j w_ij r_ij / sum_j w_ij y_j,
///   y_j <- sum_i w_ij r_ij / sum_i w_ij x_i  (with the fresh x),
/// until the bias sums shrink below tolerance * bias_scale. Trace states hold
/// two blocks (x; y); stored residuals are bias norms relative to bias_scale,
/// so `converged` still means last residual <= tolerance.
IterationTrace bailey_iterate(const BaileyProblem& problem, std::span<const double> x0,
                              std::span<const double> y0, const IterationSettings& settings = {});

/// Rescales (x, y) -> (x / x_0, y * x_0): fitted products are unchanged and
/// the first row relativity becomes exactly 1.
std::pair<std::vector<double>, std::vector<double>> normalize_bailey(std::span<const double> x,
                                                                     std::span<const double> y);

}  // namespace ratefix
