#include "ratefix/leslie_gower.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ratefix/errors.hpp"

namespace ratefix {

namespace {

double max_abs_entry(const Matrix& m) {
    double worst = 0.0;
    for (double v : m.data) worst = std::max(worst, std::fabs(v));
    return worst;
}

/// Forward elimination with partial pivoting; returns the number of nonzero
/// pivot rows at the given threshold. Works on rectangular matrices, so the
/// same routine ranks both C and the augmented [C | b-1].
std::size_t elimination_rank(Matrix a, double threshold) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < a.cols && rank < a.rows; ++col) {
        std::size_t pivot = rank;
        for (std::size_t r = rank + 1; r < a.rows; ++r)
            if (std::fabs(a.at(r, col)) > std::fabs(a.at(pivot, col))) pivot = r;
        if (std::fabs(a.at(pivot, col)) <= threshold) continue;
        if (pivot != rank)
            for (std::size_t c = 0; c < a.cols; ++c) std::swap(a.at(pivot, c), a.at(rank, c));
        for (std::size_t r = rank + 1; r < a.rows; ++r) {
            double factor = a.at(r, col) / a.at(rank, col);
            for (std::size_t c = col; c < a.cols; ++c) a.at(r, c) -= factor * a.at(rank, c);
        }
        ++rank;
    }
    return rank;
}

Matrix augmented_system(const LGModel& model) {
    const std::size_t d = model.species();
    Matrix aug(d, d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) aug.at(i, j) = model.c(i, j);
        aug.at(i, d) = model.b()[i] - 1.0;
    }
    return aug;
}

}  // namespace

LGModel::LGModel(std::vector<double> b, Matrix c) : b_(std::move(b)), c_(std::move(c)) {
    const std::size_t d = b_.size();
    if (d < 2) throw InvalidArgument("LGModel: need at least two species");
    if (c_.rows != d || c_.cols != d)
        throw DimensionMismatch("LGModel: competition matrix must be " + std::to_string(d) + "x" +
                                std::to_string(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (!(b_[i] > 0.0) || !std::isfinite(b_[i]))
            throw InvalidArgument("LGModel: growth coefficient " + std::to_string(i) +
                                  " must be positive");
        for (std::size_t j = 0; j < d; ++j) {
            double v = c_.at(i, j);
            if (!std::isfinite(v)) throw InvalidArgument("LGModel: non-finite coupling");
            if (i == j && !(v > 0.0))
                throw InvalidArgument("LGModel: diagonal coupling " + std::to_string(i) +
                                      " must be strictly positive");
            if (i != j && v < 0.0)
                throw InvalidArgument("LGModel: off-diagonal couplings must be non-negative");
        }
    }
}

std::vector<double> LGModel::carrying_capacities() const {
    std::vector<double> k(species());
    for (std::size_t i = 0; i < species(); ++i) k[i] = (b_[i] - 1.0) / c_.at(i, i);
    return k;
}

std::vector<double> bh_map(const LGModel& model, std::span<const double> x) {
    const std::size_t d = model.species();
    if (x.size() != d) throw DimensionMismatch("bh_map: population vector has wrong length");
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (x[i] < 0.0) throw InvalidArgument("bh_map: populations must be non-negative");
        double denom = 1.0;
        for (std::size_t j = 0; j < d; ++j) denom += model.c(i, j) * x[j];
        out[i] = model.b()[i] * x[i] / denom;
    }
    return out;
}

LGDiagnostics check_necessary(const LGModel& model) {
    LGDiagnostics diag;
    diag.growth_ok =
        std::all_of(model.b().begin(), model.b().end(), [](double b) { return b > 1.0; });

    double threshold = 1e-12 * max_abs_entry(model.c());
    std::size_t rank_c = elimination_rank(model.c(), threshold);
    std::size_t rank_aug = elimination_rank(augmented_system(model), threshold);
    diag.invertible = rank_c == model.species();
    diag.rank_consistent = rank_c == rank_aug;
    diag.carrying_capacities = model.carrying_capacities();
    return diag;
}

WeakCompetitionResult check_weak_competition(const LGModel& model) {
    const std::size_t d = model.species();
    std::vector<double> k = model.carrying_capacities();
    WeakCompetitionResult result;
    result.slack.resize(d);
    result.holds = true;
    for (std::size_t i = 0; i < d; ++i) {
        double coupling = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) coupling += model.c(i, j) * model.b()[j] / model.c(j, j);
        result.slack[i] = model.b()[i] - 1.0 - coupling;
        if (result.slack[i] < 0.0) result.holds = false;
    }
    return result;
}

LGBox build_box(const LGModel& model, double shrink) {
    if (!(shrink > 0.0) || !(shrink < 1.0))
        throw InvalidArgument("build_box: shrink must lie in (0,1)");
    WeakCompetitionResult weak = check_weak_competition(model);
    if (!weak.holds)
        throw WeakCompetitionViolated(
            "build_box: weak inter-specific competition fails; no trapping box");

    const std::size_t d = model.species();
    LGBox box;
    box.lower.resize(d);
    box.upper.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        double coupling = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) coupling += model.c(i, j) * model.b()[j] / model.c(j, j);
        box.lower[i] = shrink * (model.b()[i] - coupling) / model.c(i, i);
        box.upper[i] = model.b()[i] / model.c(i, i);
    }
    return box;
}

LinearEquilibrium solve_linear(const LGModel& model) {
    const std::size_t d = model.species();
    double threshold = 1e-12 * max_abs_entry(model.c());
    Matrix aug = augmented_system(model);

    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::fabs(aug.at(r, col)) > std::fabs(aug.at(pivot, col))) pivot = r;
        if (std::fabs(aug.at(pivot, col)) <= threshold) {
            std::size_t rank_c = elimination_rank(model.c(), threshold);
            std::size_t rank_aug = elimination_rank(augmented_system(model), threshold);
            bool consistent = rank_c == rank_aug;
            throw SingularMatrix(
                std::string("solve_linear: competition matrix is singular; the system has ") +
                    (consistent ? "infinitely many solutions" : "no solution"),
                consistent);
        }
        if (pivot != col)
            for (std::size_t c = 0; c <= d; ++c) std::swap(aug.at(pivot, c), aug.at(col, c));
        for (std::size_t r = col + 1; r < d; ++r) {
            double factor = aug.at(r, col) / aug.at(col, col);
            for (std::size_t c = col; c <= d; ++c) aug.at(r, c) -= factor * aug.at(col, c);
        }
    }

    LinearEquilibrium eq;
    eq.x.assign(d, 0.0);
    for (std::size_t i = d; i-- > 0;) {
        double acc = aug.at(i, d);
        for (std::size_t j = i + 1; j < d; ++j) acc -= aug.at(i, j) * eq.x[j];
        eq.x[i] = acc / aug.at(i, i);
    }
    eq.positive = std::all_of(eq.x.begin(), eq.x.end(), [](double v) { return v > 0.0; });
    return eq;
}

IterationTrace iterate_lg(const LGModel& model, std::span<const double> x0,
                          const IterationSettings& settings) {
    if (x0.size() != model.species())
        throw DimensionMismatch("iterate_lg: start vector has wrong length");
    for (double v : x0)
        if (!(v > 0.0))
            throw InvalidArgument("iterate_lg: start must be strictly positive in every species");
    if (!(settings.tolerance > 0.0))
        throw InvalidArgument("iterate_lg: tolerance must be positive");
    if (settings.max_iters == 0) throw InvalidArgument("iterate_lg: max_iters must be >= 1");

    IterationTrace trace;
    trace.iterates.push_back(FactorState({std::vector<double>(x0.begin(), x0.end())}));
    for (std::size_t step = 0; step < settings.max_iters; ++step) {
        std::vector<double> next = bh_map(model, trace.iterates.back().blocks[0]);
        FactorState next_state({std::move(next)});
        double res = residual_norm(next_state, trace.iterates.back(), settings.norm);
        trace.iterates.push_back(std::move(next_state));
        trace.residuals.push_back(res);
        trace.iterations_used = step + 1;
        if (res <= settings.tolerance) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

SummersForm to_summers_form(const LGModel& model) {
    const std::size_t d = model.species();
    for (double b : model.b())
        if (!(b > 1.0))
            throw GrowthNotAboveOne(
                "to_summers_form: every growth coefficient must exceed 1 for positive "
                "carrying capacities");
    SummersForm form;
    form.mu = model.b();
    form.k = model.carrying_capacities();
    form.c_tilde = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) form.c_tilde.at(i, j) = form.k[i] * model.c(i, j);
    return form;
}

LGModel from_summers_form(const SummersForm& form) {
    const std::size_t d = form.mu.size();
    if (form.k.size() != d || form.c_tilde.rows != d || form.c_tilde.cols != d)
        throw DimensionMismatch("from_summers_form: inconsistent shapes");
    Matrix c(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!(form.k[i] > 0.0))
            throw InvalidArgument("from_summers_form: carrying capacities must be positive");
        c.at(i, i) = (form.mu[i] - 1.0) / form.k[i];
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) c.at(i, j) = form.c_tilde.at(i, j) / form.k[i];
    }
    return LGModel(form.mu, std::move(c));
}

LGDiagnostics diagnose(const LGModel& model, double shrink) {
    LGDiagnostics diag = check_necessary(model);
    WeakCompetitionResult weak = check_weak_competition(model);
    diag.weak_competition = weak.holds;
    diag.weak_slack = std::move(weak.slack);
    if (weak.holds) diag.box = build_box(model, shrink);
    return diag;
}

}  // namespace ratefix
