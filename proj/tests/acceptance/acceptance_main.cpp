// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion carries its own runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "ratefix/bailey.hpp"
#include "ratefix/convergence.hpp"
#include "ratefix/io.hpp"
#include "ratefix/iteration.hpp"
#include "ratefix/leslie_gower.hpp"
#include "ratefix/rating.hpp"

#ifndef RATEFIX_CLI_PATH
#define RATEFIX_CLI_PATH "ratefix"
#endif
#ifndef RATEFIX_GOLDEN_DIR
#define RATEFIX_GOLDEN_DIR "."
#endif

using namespace ratefix;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& message) {
        if (!condition) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << message;
        }
    }
};

std::vector<RatingProblem> desk_instances(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<RatingProblem> out;
    for (std::size_t trial = 0; trial < count; ++trial) {
        std::vector<std::size_t> dims = trial % 2 ? std::vector<std::size_t>{3, 3, 2}
                                                  : std::vector<std::size_t>{2, 2, 2};
        out.push_back(testing::random_problem(rng, dims));
    }
    return out;
}

// 1. Analytic Jacobian vs central finite differences.
bool jacobian_oracle(Check& check) {
    std::mt19937_64 rng(1001);
    std::vector<RatingProblem> instances = desk_instances(1001, 20);
    double worst = 0.0;
    for (const RatingProblem& p : instances) {
        FactorState f = testing::random_state(rng, p.dims(), 0.5, 2.0);
        Matrix analytic = jacobian(p, f);
        Matrix numeric = testing::fd_jacobian(p, f, 1e-6);
        worst = std::max(worst, testing::max_abs_entry_difference(analytic, numeric));
    }
    check.detail << "max |analytic - fd| = " << worst;
    check.require(worst <= 1e-6, "finite-difference mismatch above 1e-6");
    return check.ok;
}

// 2. Certificate bounds dominate the sampled Jacobian norms over the box.
bool certificate_soundness(Check& check) {
    std::mt19937_64 rng(2002);
    std::vector<RatingProblem> instances = desk_instances(2002, 20);
    double worst_margin = -1e300;
    for (const RatingProblem& p : instances) {
        auto [rho_inf, rho_1] = rho_certificates(p);
        auto [r_inf, r_1] = r_certificates(p);
        check.require(rho_inf <= r_inf * (1 + 1e-12), "rho_inf above r_inf");
        check.require(rho_1 <= r_1 * (1 + 1e-12), "rho_1 above r_1");
        BoxU box = compute_box(p);
        for (int s = 0; s < 200; ++s) {
            FactorState f = sample_in_box(box, rng);
            Matrix j = jacobian(p, f, true);
            double inf_norm = matrix_norm(j, MatrixNormKind::Infinity);
            double one_norm = matrix_norm(j, MatrixNormKind::One);
            worst_margin = std::max({worst_margin, inf_norm - rho_inf, one_norm - rho_1});
            check.require(inf_norm <= rho_inf + 1e-12, "infinity-norm exceeds rho_inf");
            check.require(one_norm <= rho_1 + 1e-12, "one-norm exceeds rho_1");
        }
    }
    check.detail << "worst norm-minus-bound margin = " << worst_margin;
    return check.ok;
}

// 3. Certified instances converge to one point from every start.
bool certified_convergence(Check& check) {
    std::mt19937_64 rng(3003);
    double worst_spread = 0.0, worst_residual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::size_t> dims = trial % 2 ? std::vector<std::size_t>{3, 3, 2}
                                                  : std::vector<std::size_t>{2, 2, 2};
        RatingProblem p = testing::random_problem(rng, dims, 1.0, 1.01);
        auto [rho_inf, rho_1] = rho_certificates(p);
        check.require(std::min(rho_inf, rho_1) < 1.0, "construction failed to certify");

        std::vector<FactorState> limits;
        for (int start = 0; start < 10; ++start) {
            IterationTrace trace = iterate(p, testing::random_state(rng, p.dims(), 1e-2, 1e2));
            check.require(trace.converged, "a certified run failed to converge");
            worst_residual = std::max(worst_residual, fixed_point_residual(p, trace.last()));
            limits.push_back(trace.last());
        }
        for (std::size_t a = 0; a < limits.size(); ++a)
            for (std::size_t b = a + 1; b < limits.size(); ++b)
                worst_spread = std::max(worst_spread, max_abs_difference(limits[a], limits[b]));
    }
    check.detail << "limit spread = " << worst_spread << ", fixed-point residual = "
                 << worst_residual;
    check.require(worst_spread <= 1e-8, "limits disagree beyond 1e-8");
    check.require(worst_residual <= 1e-9, "fixed-point residual above 1e-9");
    return check.ok;
}

// 4. Every sampled positive state maps into the box.
bool box_trapping(Check& check) {
    std::mt19937_64 rng(4004);
    std::vector<RatingProblem> instances = desk_instances(4004, 20);
    std::size_t violations = 0;
    for (const RatingProblem& p : instances) {
        BoxU box = compute_box(p);
        for (int s = 0; s < 200; ++s) {
            FactorState f = testing::random_state(rng, p.dims(), 1e-2, 1e2);
            if (!box.contains(phi(p, f), 1e-12)) ++violations;
        }
    }
    check.detail << violations << " violations in 4000 samples";
    check.require(violations == 0, "sweep images escaped the box");
    return check.ok;
}

// 5. Degenerate inputs are handled exactly.
bool degenerate_exactness(Check& check) {
    std::mt19937_64 rng(5005);
    RiskTensor losses = testing::random_tensor(rng, {2, 3, 2}, 0.5, 2.0);
    RatingProblem constant_exposure(losses, RiskTensor::constant({2, 3, 2}, 3.7), 1.0);

    ConvergenceCertificate cert = certify(constant_exposure);
    check.require(cert.rho_inf == 0.0 && cert.rho_1 == 0.0, "slicewise bounds not exactly zero");
    check.require(cert.r_inf == 0.0 && cert.r_1 == 0.0, "global bounds not exactly zero");
    check.require(cert.certified(), "degenerate certificate not certified");

    IterationTrace trace = iterate(constant_exposure, FactorState::ones(constant_exposure.dims()));
    check.require(trace.converged && trace.iterations_used <= 2, "not converged within two sweeps");
    check.require(max_abs_difference(trace.iterates[1], trace.last()) <= 1e-14,
                  "first sweep did not land on the fixed point");
    check.require(fixed_point_residual(constant_exposure, trace.iterates[1]) <= 1e-14,
                  "first sweep is not a fixed point at machine precision");

    RatingProblem uniform(RiskTensor::constant({2, 2, 2}, 5.0), RiskTensor::constant({2, 2, 2}, 2.0),
                          1.0);
    IterationTrace utrace = iterate(uniform, FactorState::ones(uniform.dims()));
    check.require(utrace.converged && utrace.iterations_used == 1, "uniform case not one-step");
    for (const auto& block : utrace.last().blocks)
        for (double v : block)
            check.require(v == 1.0, "uniform factors not exactly one");
    check.detail << "constant-exposure bounds all zero, uniform factors exact";
    return check.ok;
}

// 6. Weak-competition models: iteration limit equals the linear solution.
bool lg_equivalence(Check& check) {
    std::mt19937_64 rng(6006);
    const std::size_t species[] = {2, 3, 5, 8};
    double worst_gap = 0.0, worst_fp = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        LGModel model = testing::random_weak_model(rng, species[trial % 4]);
        LinearEquilibrium eq = solve_linear(model);
        check.require(eq.positive, "linear solution not positive");

        std::vector<double> image = bh_map(model, eq.x);
        for (std::size_t i = 0; i < model.species(); ++i)
            worst_fp = std::max(worst_fp, std::fabs(image[i] - eq.x[i]));

        std::uniform_real_distribution<double> u(std::log(1e-2), std::log(1e2));
        for (int start = 0; start < 5; ++start) {
            std::vector<double> x0(model.species());
            for (double& v : x0) v = std::exp(u(rng));
            IterationTrace trace = iterate_lg(model, x0);
            check.require(trace.converged, "population run failed to converge");
            for (std::size_t i = 0; i < model.species(); ++i)
                worst_gap = std::max(worst_gap,
                                     std::fabs(trace.last().blocks[0][i] - eq.x[i]));
        }
    }
    check.detail << "max |limit - linear| = " << worst_gap << ", max fixed-point residual = "
                 << worst_fp;
    check.require(worst_gap <= 1e-7, "iteration limit disagrees with the linear solve");
    check.require(worst_fp <= 1e-10, "linear solution is not a map fixed point");
    return check.ok;
}

// 7. Diagonal models converge to the closed-form equilibria.
bool lg_decoupled(Check& check) {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> growth(1.5, 4.0);
    std::uniform_real_distribution<double> diag(0.5, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t d = 2 + trial % 3;
        std::vector<double> b(d);
        Matrix c(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            b[i] = growth(rng);
            c.at(i, i) = diag(rng);
        }
        LGModel model(b, std::move(c));
        std::vector<double> k = model.carrying_capacities();
        std::vector<double> x0(d, 0.5);
        IterationTrace trace = iterate_lg(model, x0);
        check.require(trace.converged, "diagonal model failed to converge");
        for (std::size_t i = 0; i < d; ++i)
            worst = std::max(worst, std::fabs(trace.last().blocks[0][i] - k[i]));
    }
    check.detail << "max |limit - K| = " << worst;
    check.require(worst <= 1e-10, "decoupled limit misses the closed form");
    return check.ok;
}

// 8. Necessary-condition diagnostics on hand-built fixtures.
bool lemma_checks(Check& check) {
    Matrix singular(2, 2);
    singular.at(0, 0) = singular.at(0, 1) = singular.at(1, 0) = singular.at(1, 1) = 1.0;

    LGDiagnostics consistent = check_necessary(LGModel({2, 2}, singular));
    check.require(!consistent.invertible, "singular matrix reported invertible");
    check.require(consistent.rank_consistent, "consistent singular system flagged inconsistent");

    LGDiagnostics inconsistent = check_necessary(LGModel({2, 3}, singular));
    check.require(!inconsistent.invertible, "singular matrix reported invertible");
    check.require(!inconsistent.rank_consistent, "inconsistent system flagged consistent");

    Matrix id(2, 2);
    id.at(0, 0) = id.at(1, 1) = 1.0;
    LGDiagnostics low_growth = check_necessary(LGModel({0.5, 2.0}, id));
    check.require(!low_growth.growth_ok, "growth below one not flagged");
    LGDiagnostics healthy = check_necessary(LGModel({2, 3}, id));
    check.require(healthy.growth_ok && healthy.invertible && healthy.rank_consistent,
                  "healthy fixture misdiagnosed");
    check.detail << "all diagnostic fixtures as hand-computed";
    return check.ok;
}

// 9. Minimum-bias and loss-ratio agree on exact multiplicative data.
bool bailey_crosscheck(Check& check) {
    std::vector<double> x = {1, 2, 3}, y = {1, 0.5, 2, 4};
    std::vector<double> r;
    for (double xi : x)
        for (double yj : y) r.push_back(xi * yj);
    BaileyProblem bp(3, 4, r, std::vector<double>(12, 1.0));

    IterationSettings settings;
    settings.tolerance = 1e-12;
    std::vector<double> x0(3, 1.0), y0(4, 1.0);
    IterationTrace trace = bailey_iterate(bp, x0, y0, settings);
    check.require(trace.converged, "minimum-bias fit did not converge");

    double worst_product = 0.0;
    const auto& bx = trace.last().blocks[0];
    const auto& by = trace.last().blocks[1];
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            worst_product = std::max(worst_product, std::fabs(bx[i] * by[j] - bp.r(i, j)));
    auto [row_bias, col_bias] = bailey_residuals(bp, bx, by);
    double worst_bias = 0.0;
    for (double v : row_bias) worst_bias = std::max(worst_bias, std::fabs(v));
    for (double v : col_bias) worst_bias = std::max(worst_bias, std::fabs(v));

    RatingProblem lr(RiskTensor({3, 4}, r), RiskTensor::constant({3, 4}, 1.0), 1.0);
    IterationTrace lr_trace = iterate(lr, FactorState::ones(lr.dims()), settings);
    check.require(lr_trace.converged, "loss-ratio run did not converge");
    double base = indicated_base_rate(lr, lr_trace.last());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double predicted = base * lr_trace.last().blocks[0][i] * lr_trace.last().blocks[1][j];
            const std::size_t idx[2] = {i, j};
            worst_product = std::max(worst_product, std::fabs(predicted - lr.losses().at(idx)));
        }

    check.detail << "max product error = " << worst_product << ", max bias = " << worst_bias;
    check.require(worst_product <= 1e-9, "fitted products disagree with the data");
    check.require(worst_bias <= 1e-9, "bias sums above 1e-9");
    return check.ok;
}

// 10. CLI determinism and golden reports.
bool cli_golden(Check& check) {
    struct Fixture {
        const char* name;
        std::string args;
    };
    const std::string golden = RATEFIX_GOLDEN_DIR;
    const Fixture fixtures[] = {
        {"uniform_rating", "rate --input " + golden + "/uniform_rating.csv --plr 1 --format json"},
        {"separable_rating",
         "rate --input " + golden + "/separable_rating.csv --plr 0.625 --format json"},
        {"decoupled_lg", "lg --input " + golden + "/decoupled_lg.json --format json"},
    };
    for (const Fixture& fixture : fixtures) {
        std::string expected_path = golden + "/" + fixture.name + ".expected.json";
        std::string expected = read_file(expected_path);
        std::string reports[2];
        for (int pass = 0; pass < 2; ++pass) {
            std::string out = std::string("acceptance_") + fixture.name + ".json";
            std::string cmd = std::string(RATEFIX_CLI_PATH) + " " + fixture.args +
                              " --seed 0 --out " + out;
            int status = std::system(cmd.c_str());
            check.require(status == 0, std::string(fixture.name) + ": CLI exited nonzero");
            reports[pass] = read_file(out);
            std::remove(out.c_str());
        }
        check.require(reports[0] == reports[1],
                      std::string(fixture.name) + ": consecutive runs differ");
        check.require(reports[0] == expected,
                      std::string(fixture.name) + ": report differs from the stored golden");
    }
    check.detail << "3 fixtures, byte-identical across runs and against the goldens";
    return check.ok;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    bool (*fn)(Check&);
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "Jacobian matches central finite differences", 5.0, jacobian_oracle},
        {2, "certificates dominate sampled Jacobian norms", 10.0, certificate_soundness},
        {3, "certified instances converge from every start", 10.0, certified_convergence},
        {4, "sweep images land in the trapping box", 10.0, box_trapping},
        {5, "degenerate inputs handled exactly", 5.0, degenerate_exactness},
        {6, "weak-competition limit equals the linear solve", 20.0, lg_equivalence},
        {7, "diagonal models reach the closed-form equilibria", 5.0, lg_decoupled},
        {8, "necessary-condition diagnostics on fixtures", 5.0, lemma_checks},
        {9, "minimum-bias and loss-ratio agree on clean data", 5.0, bailey_crosscheck},
        {10, "CLI reports are deterministic and match goldens", 20.0, cli_golden},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criterion.fn(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.budget_seconds) {
            ok = false;
            check.require(false, "runtime budget exceeded");
        }
        std::printf("[%s] %2d. %s (%.2fs) %s\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name, elapsed, check.detail.str().c_str());
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
