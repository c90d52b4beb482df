#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ratefix/iteration.hpp"
#include "ratefix/norms.hpp"

namespace ratefix {

/// Multi-species Leslie-Gower model: per-species growth coefficients b and
/// the competition matrix C with strictly positive diagonal and non-negative
/// off-diagonal entries.
class LGModel {
public:
    LGModel(std::vector<double> b, Matrix c);

    std::size_t species() const { return b_.size(); }
    const std::vector<double>& b() const { return b_; }
    const Matrix& c() const { return c_; }
    double c(std::size_t i, std::size_t j) const { return c_.at(i, j); }

    /// Single-species equilibria (b_i - 1) / c_ii.
    std::vector<double> carrying_capacities() const;

private:
    std::vector<double> b_;
    Matrix c_;
};

/// Coordinatewise box [h_i, b_i / c_ii] that traps the dynamics under weak
/// competition.
struct LGBox {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct WeakCompetitionResult {
    bool holds = false;
    std::vector<double> slack;  // b_i - 1 - sum_{j != i} c_ij b_j / c_jj
};

struct LGDiagnostics {
    bool growth_ok = false;        // all b_i > 1
    bool rank_consistent = false;  // rank [C | b-1] == rank C
    bool invertible = false;
    bool weak_competition = false;
    std::vector<double> weak_slack;
    std::vector<double> carrying_capacities;
    std::optional<LGBox> box;  // present when weak competition holds
};

struct LinearEquilibrium {
    std::vector<double> x;
    bool positive = false;  // strictly positive in every coordinate
};

struct SummersForm {
    std::vector<double> mu;  // growth rates (= b)
    std::vector<double> k;   // carrying capacities
    Matrix c_tilde;          // scaled couplings, zero diagonal
};

/// One step of the competition dynamics:
///   out_i = b_i x_i / (1 + sum_j c_ij x_j).
std::vector<double> bh_map(const LGModel& model, std::span<const double> x);

/// Growth, rank-consistency and invertibility diagnostics (no failures, only
/// flags); also fills the carrying capacities.
LGDiagnostics check_necessary(const LGModel& model);

/// Weak inter-specific competition: sum_{j != i} c_ij b_j / c_jj <= b_i - 1
/// for every species, with the per-species slack.
WeakCompetitionResult check_weak_competition(const LGModel& model);

/// Trapping box under weak competition: upper = b_i / c_ii and
/// lower = shrink * (b_i - sum_{j != i} c_ij b_j / c_jj) / c_ii, shrink in
/// (0,1). Throws WeakCompetitionViolated otherwise.
LGBox build_box(const LGModel& model, double shrink = 0.5);

/// Unique solution of C x = b - 1 by Gaussian elimination with partial
/// pivoting. Throws SingularMatrix (carrying the rank-consistency flag) when
/// C has no inverse at the pivot threshold 1e-12 * max|C|.
LinearEquilibrium solve_linear(const LGModel& model);

/// Iterates bh_map from a strictly positive start. The trace stores each
/// population vector as a single-block state.
IterationTrace iterate_lg(const LGModel& model, std::span<const double> x0,
                          const IterationSettings& settings = IterationSettings::lg_defaults());

/// Conversion to the growth-rate / carrying-capacity parameterization.
/// Requires every b_i > 1.
SummersForm to_summers_form(const LGModel& model);

/// Exact algebraic inverse of to_summers_form.
LGModel from_summers_form(const SummersForm& form);

/// Full diagnostic bundle for reporting.
LGDiagnostics diagnose(const LGModel& model, double shrink = 0.5);

}  // namespace ratefix
