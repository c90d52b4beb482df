#pragma once

// Shared fixtures and independent oracles for the test suite. Everything in
// here stays deliberately naive (explicit loops, no reuse of the library's
// aggregation paths) so it can serve as a cross-check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ratefix/convergence.hpp"
#include "ratefix/iteration.hpp"
#include "ratefix/leslie_gower.hpp"
#include "ratefix/norms.hpp"
#include "ratefix/rating.hpp"
#include "ratefix/risk_tensor.hpp"

namespace testing {

inline ratefix::RiskTensor random_tensor(std::mt19937_64& rng,
                                         const std::vector<std::size_t>& dims, double lo,
                                         double hi) {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> values(n);
    for (double& v : values) v = u(rng);
    return ratefix::RiskTensor(dims, std::move(values));
}

inline ratefix::RatingProblem random_problem(std::mt19937_64& rng,
                                             const std::vector<std::size_t>& dims,
                                             double e_lo = 0.5, double e_hi = 2.0,
                                             double l_lo = 0.5, double l_hi = 2.0,
                                             double plr = 1.0) {
    ratefix::RiskTensor losses = random_tensor(rng, dims, l_lo, l_hi);
    ratefix::RiskTensor exposures = random_tensor(rng, dims, e_lo, e_hi);
    return ratefix::RatingProblem(std::move(losses), std::move(exposures), plr);
}

inline ratefix::FactorState random_state(std::mt19937_64& rng,
                                         const std::vector<std::size_t>& dims, double lo,
                                         double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    ratefix::FactorState f;
    for (std::size_t d : dims) {
        std::vector<double> block(d);
        for (double& v : block) v = u(rng);
        f.blocks.push_back(std::move(block));
    }
    return f;
}

/// Central finite differences of the re-rating sweep, column by column.
inline ratefix::Matrix fd_jacobian(const ratefix::RatingProblem& problem,
                                   const ratefix::FactorState& f, double h = 1e-6,
                                   bool fixed_base_coordinates = false) {
    std::vector<double> flat = f.flatten();
    const std::size_t dim = flat.size();
    ratefix::Matrix jac(dim, dim);

    std::vector<std::size_t> base_cols;
    std::size_t offset = 0;
    for (const auto& block : f.blocks) {
        base_cols.push_back(offset);
        offset += block.size();
    }

    for (std::size_t c = 0; c < dim; ++c) {
        if (fixed_base_coordinates) {
            bool is_base = false;
            for (std::size_t b : base_cols) is_base |= (b == c);
            if (is_base) continue;  // column stays zero
        }
        std::vector<double> hi = flat, lo = flat;
        hi[c] += h;
        lo[c] -= h;
        ratefix::FactorState fhi = ratefix::FactorState::from_flat(hi, problem.dims());
        ratefix::FactorState flo = ratefix::FactorState::from_flat(lo, problem.dims());
        std::vector<double> phi_hi = ratefix::phi(problem, fhi).flatten();
        std::vector<double> phi_lo = ratefix::phi(problem, flo).flatten();
        for (std::size_t r = 0; r < dim; ++r)
            jac.at(r, c) = (phi_hi[r] - phi_lo[r]) / (2.0 * h);
    }
    return jac;
}

inline double max_abs_entry_difference(const ratefix::Matrix& a, const ratefix::Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::fabs(a.data[i] - b.data[i]));
    return worst;
}

/// Independent transcription of one three-factor sweep: slice sums and
/// weighted exposure ratios with plain nested loops over (i, j, k).
inline ratefix::FactorState sweep_oracle_3(const ratefix::RatingProblem& problem,
                                           const ratefix::FactorState& f) {
    const ratefix::RiskTensor& L = problem.losses();
    const ratefix::RiskTensor& E = problem.exposures();
    const std::size_t m = L.dim(0), n = L.dim(1), p = L.dim(2);
    const auto& x = f.blocks[0];
    const auto& y = f.blocks[1];
    const auto& z = f.blocks[2];

    auto cell = [&](const ratefix::RiskTensor& t, std::size_t i, std::size_t j, std::size_t k) {
        const std::size_t idx[3] = {i, j, k};
        return t.at(idx);
    };

    std::vector<double> lx(m, 0.0), ly(n, 0.0), lz(p, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < p; ++k) {
                lx[i] += cell(L, i, j, k);
                ly[j] += cell(L, i, j, k);
                lz[k] += cell(L, i, j, k);
            }

    ratefix::FactorState out;
    out.blocks = {std::vector<double>(m), std::vector<double>(n), std::vector<double>(p)};

    for (std::size_t i = 0; i < m; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < p; ++k) {
                num += cell(E, 0, j, k) * y[j] * z[k];
                den += cell(E, i, j, k) * y[j] * z[k];
            }
        out.blocks[0][i] = lx[i] / lx[0] * num / den;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < p; ++k) {
                num += cell(E, i, 0, k) * x[i] * z[k];
                den += cell(E, i, j, k) * x[i] * z[k];
            }
        out.blocks[1][j] = ly[j] / ly[0] * num / den;
    }
    for (std::size_t k = 0; k < p; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                num += cell(E, i, j, 0) * x[i] * y[j];
                den += cell(E, i, j, k) * x[i] * y[j];
            }
        out.blocks[2][k] = lz[k] / lz[0] * num / den;
    }
    return out;
}

/// Random competition model with coupling budgets kept inside the weak
/// regime; regenerates until the matrix ranks full.
inline ratefix::LGModel random_weak_model(std::mt19937_64& rng, std::size_t d) {
    std::uniform_real_distribution<double> growth(1.5, 4.0);
    std::uniform_real_distribution<double> diag(0.5, 2.0);
    std::uniform_real_distribution<double> budget_frac(0.2, 0.9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (;;) {
        std::vector<double> b(d);
        for (double& v : b) v = growth(rng);
        ratefix::Matrix c(d, d);
        for (std::size_t i = 0; i < d; ++i) c.at(i, i) = diag(rng);
        for (std::size_t i = 0; i < d; ++i) {
            double budget = budget_frac(rng) * (b[i] - 1.0);
            std::vector<double> shares(d, 0.0);
            double total = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) {
                    shares[j] = unit(rng);
                    total += shares[j];
                }
            if (total <= 0.0) total = 1.0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) c.at(i, j) = shares[j] / total * budget / (b[j] / c.at(j, j));
        }
        ratefix::LGModel model(std::move(b), std::move(c));
        if (ratefix::check_necessary(model).invertible &&
            ratefix::check_weak_competition(model).holds)
            return model;
    }
}

}  // namespace testing
