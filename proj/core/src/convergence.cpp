#include "ratefix/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ratefix/errors.hpp"

namespace ratefix {

namespace {

struct SliceStats {
    std::vector<std::vector<double>> loss;  // slice loss sums per factor
    std::vector<std::vector<double>> emin;  // slice exposure minima
    std::vector<std::vector<double>> emax;  // slice exposure maxima
};

SliceStats slice_stats(const RatingProblem& problem) {
    const RiskTensor& E = problem.exposures();
    const std::size_t rank = E.rank();
    SliceStats st;
    st.loss.reserve(rank);
    st.emin.resize(rank);
    st.emax.resize(rank);
    for (std::size_t t = 0; t < rank; ++t) {
        st.loss.push_back(slice_losses(problem, t));
        st.emin[t].assign(E.dim(t), std::numeric_limits<double>::infinity());
        st.emax[t].assign(E.dim(t), 0.0);
    }
    for (std::size_t flat = 0; flat < E.size(); ++flat) {
        double e = E[flat];
        for (std::size_t t = 0; t < rank; ++t) {
            std::size_t s = E.coordinate(flat, t);
            st.emin[t][s] = std::min(st.emin[t][s], e);
            st.emax[t][s] = std::max(st.emax[t][s], e);
        }
    }
    return st;
}

void require_positive_extremes(const SliceStats& st, const char* who) {
    for (std::size_t t = 0; t < st.emin.size(); ++t)
        for (std::size_t s = 0; s < st.emin[t].size(); ++s)
            if (!(st.emin[t][s] > 0.0))
                throw ZeroExposure(std::string(who) + ": slice " + std::to_string(s) +
                                   " of factor " + std::to_string(t) +
                                   " contains a zero exposure; the bounding box is unbounded");
}

void require_positive_base_losses(const SliceStats& st, const char* who) {
    for (std::size_t t = 0; t < st.loss.size(); ++t)
        if (!(st.loss[t][0] > 0.0))
            throw ZeroBaseSliceLoss(std::string(who) + ": base slice of factor " +
                                    std::to_string(t) + " has zero total loss");
}

void require_three_factors(const RatingProblem& problem, const char* who) {
    if (problem.factor_count() != 3)
        throw UnsupportedDimension(std::string(who) +
                                   ": closed-form bounds cover exactly three factors; use the "
                                   "multi-start empirical check for other ranks");
}

/// Per-slice spread term (l_s/l_base) (M_base M_s - mu_base mu_s) / mu_s^2.
std::vector<double> spread_terms(const SliceStats& st, std::size_t t) {
    const auto& l = st.loss[t];
    const auto& mu = st.emin[t];
    const auto& M = st.emax[t];
    std::vector<double> out(l.size());
    for (std::size_t s = 0; s < l.size(); ++s)
        out[s] = (l[s] / l[0]) * (M[0] * M[s] - mu[0] * mu[s]) / (mu[s] * mu[s]);
    return out;
}

/// Domination term l_base / (mu_base sum_s l_s / M_s).
double domination_term(const SliceStats& st, std::size_t t) {
    const auto& l = st.loss[t];
    double denom = 0.0;
    for (std::size_t s = 0; s < l.size(); ++s) denom += l[s] / st.emax[t][s];
    return l[0] / (st.emin[t][0] * denom);
}

}  // namespace

bool BoxU::contains(const FactorState& f, double relative_slack) const {
    if (f.blocks.size() != lower.size()) return false;
    for (std::size_t t = 0; t < lower.size(); ++t) {
        if (f.blocks[t].size() != lower[t].size()) return false;
        for (std::size_t s = 0; s < lower[t].size(); ++s) {
            double lo = lower[t][s];
            double hi = upper[t][s];
            double slack_lo = relative_slack * std::fabs(lo);
            double slack_hi = relative_slack * std::fabs(hi);
            double v = f.blocks[t][s];
            if (v < lo - slack_lo || v > hi + slack_hi) return false;
        }
    }
    return true;
}

BoxU compute_box(const RatingProblem& problem) {
    SliceStats st = slice_stats(problem);
    require_positive_extremes(st, "compute_box");
    require_positive_base_losses(st, "compute_box");

    BoxU box;
    const std::size_t rank = problem.factor_count();
    box.lower.resize(rank);
    box.upper.resize(rank);
    for (std::size_t t = 0; t < rank; ++t) {
        const auto& l = st.loss[t];
        const auto& mu = st.emin[t];
        const auto& M = st.emax[t];
        box.lower[t].resize(l.size());
        box.upper[t].resize(l.size());
        for (std::size_t s = 0; s < l.size(); ++s) {
            box.lower[t][s] = l[s] * mu[0] / (l[0] * M[s]);
            box.upper[t][s] = l[s] * M[0] / (l[0] * mu[s]);
        }
    }
    return box;
}

Matrix jacobian(const RatingProblem& problem, const FactorState& f, bool fixed_base_coordinates) {
    require_three_factors(problem, "jacobian");
    problem.require_compatible(f);

    const RiskTensor& E = problem.exposures();
    const std::size_t m = E.dim(0), n = E.dim(1), p = E.dim(2);
    const auto& x = f.blocks[0];
    const auto& y = f.blocks[1];
    const auto& z = f.blocks[2];

    std::vector<double> lx = slice_losses(problem, 0);
    std::vector<double> ly = slice_losses(problem, 1);
    std::vector<double> lz = slice_losses(problem, 2);
    for (std::size_t t = 0; t < 3; ++t) {
        double base = (t == 0 ? lx[0] : t == 1 ? ly[0] : lz[0]);
        if (!(base > 0.0))
            throw ZeroBaseSliceLoss("jacobian: base slice of factor " + std::to_string(t) +
                                    " has zero total loss");
    }

    // Weighted exposure sums per slice (denominators of the three blocks)
    // and the partial sums that the quotient rule needs:
    //   A_i = sum_jk e y z,  D_j = sum_ik e x z,  G_k = sum_ij e x y,
    //   B_ij = sum_k e z,    C_ik = sum_j e y,    F_jk = sum_i e x.
    std::vector<double> A(m, 0.0), D(n, 0.0), G(p, 0.0);
    Matrix B(m, n), C(m, p), F(n, p);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < p; ++k) {
                const std::size_t idx[3] = {i, j, k};
                double e = E.at(idx);
                B.at(i, j) += e * z[k];
                C.at(i, k) += e * y[j];
                F.at(j, k) += e * x[i];
                A[i] += e * y[j] * z[k];
                D[j] += e * x[i] * z[k];
                G[k] += e * x[i] * y[j];
            }
    for (std::size_t i = 0; i < m; ++i)
        if (!(A[i] > 0.0)) throw ZeroExposure("jacobian: zero weighted exposure sum");
    for (std::size_t j = 0; j < n; ++j)
        if (!(D[j] > 0.0)) throw ZeroExposure("jacobian: zero weighted exposure sum");
    for (std::size_t k = 0; k < p; ++k)
        if (!(G[k] > 0.0)) throw ZeroExposure("jacobian: zero weighted exposure sum");

    const std::size_t dim = m + n + p;
    Matrix J(dim, dim);

    for (std::size_t i = 0; i < m; ++i) {
        double scale = lx[i] / lx[0];
        double denom = A[i] * A[i];
        for (std::size_t j = 0; j < n; ++j)
            J.at(i, m + j) = scale * (B.at(0, j) * A[i] - B.at(i, j) * A[0]) / denom;
        for (std::size_t k = 0; k < p; ++k)
            J.at(i, m + n + k) = scale * (C.at(0, k) * A[i] - C.at(i, k) * A[0]) / denom;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double scale = ly[j] / ly[0];
        double denom = D[j] * D[j];
        for (std::size_t i = 0; i < m; ++i)
            J.at(m + j, i) = scale * (B.at(i, 0) * D[j] - B.at(i, j) * D[0]) / denom;
        for (std::size_t k = 0; k < p; ++k)
            J.at(m + j, m + n + k) = scale * (F.at(0, k) * D[j] - F.at(j, k) * D[0]) / denom;
    }
    for (std::size_t k = 0; k < p; ++k) {
        double scale = lz[k] / lz[0];
        double denom = G[k] * G[k];
        for (std::size_t i = 0; i < m; ++i)
            J.at(m + n + k, i) = scale * (C.at(i, 0) * G[k] - C.at(i, k) * G[0]) / denom;
        for (std::size_t j = 0; j < n; ++j)
            J.at(m + n + k, m + j) = scale * (F.at(j, 0) * G[k] - F.at(j, k) * G[0]) / denom;
    }

    if (fixed_base_coordinates) {
        const std::size_t base_cols[3] = {0, m, m + n};
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c : base_cols) J.at(r, c) = 0.0;
    }
    return J;
}

std::pair<double, double> rho_certificates(const RatingProblem& problem) {
    require_three_factors(problem, "rho_certificates");
    SliceStats st = slice_stats(problem);
    require_positive_extremes(st, "rho_certificates");
    require_positive_base_losses(st, "rho_certificates");

    const auto& dims = problem.dims();
    std::vector<std::vector<double>> spread(3);
    double domination[3];
    for (std::size_t t = 0; t < 3; ++t) {
        spread[t] = spread_terms(st, t);
        domination[t] = domination_term(st, t);
    }

    // Row bound: for each slice of factor t, the spread term times the
    // (extent-1)-weighted domination terms of the two foreign factors.
    double rho_inf = 0.0;
    for (std::size_t t = 0; t < 3; ++t) {
        double foreign = 0.0;
        for (std::size_t u = 0; u < 3; ++u)
            if (u != t) foreign += static_cast<double>(dims[u] - 1) * domination[u];
        for (double s : spread[t]) rho_inf = std::max(rho_inf, s * foreign);
    }

    // Column bound: domination term of factor t times the full spread sums of
    // the two foreign factors.
    double rho_1 = 0.0;
    for (std::size_t t = 0; t < 3; ++t) {
        double foreign = 0.0;
        for (std::size_t u = 0; u < 3; ++u) {
            if (u == t) continue;
            for (double s : spread[u]) foreign += s;
        }
        rho_1 = std::max(rho_1, domination[t] * foreign);
    }
    return {rho_inf, rho_1};
}

std::pair<double, double> r_certificates(const RatingProblem& problem) {
    require_three_factors(problem, "r_certificates");
    SliceStats st = slice_stats(problem);
    require_positive_extremes(st, "r_certificates");
    require_positive_base_losses(st, "r_certificates");

    const RiskTensor& E = problem.exposures();
    const auto& dims = problem.dims();
    double mu = E.min_value();
    double M = E.max_value();
    double L = problem.losses().total();
    double spread3 = M * (M * M - mu * mu) / (mu * mu * mu);

    double worst_inf = 0.0;
    double worst_1 = 0.0;
    for (std::size_t t = 0; t < 3; ++t) {
        double ratio_sum = 0.0;  // sum over foreign factors of l_base^t / l_base^u
        for (std::size_t u = 0; u < 3; ++u)
            if (u != t) ratio_sum += st.loss[t][0] / st.loss[u][0];
        worst_1 = std::max(worst_1, ratio_sum);

        for (double ls : st.loss[t]) {
            double weighted = 0.0;
            for (std::size_t u = 0; u < 3; ++u)
                if (u != t)
                    weighted += static_cast<double>(dims[u] - 1) * ls * st.loss[u][0] /
                                st.loss[t][0];
            worst_inf = std::max(worst_inf, weighted);
        }
    }
    return {spread3 / L * worst_inf, spread3 * worst_1};
}

ConvergenceCertificate certify(const RatingProblem& problem) {
    ConvergenceCertificate cert;
    cert.box = compute_box(problem);
    auto [rho_inf, rho_1] = rho_certificates(problem);
    auto [r_inf, r_1] = r_certificates(problem);
    cert.rho_inf = rho_inf;
    cert.rho_1 = rho_1;
    cert.r_inf = r_inf;
    cert.r_1 = r_1;
    cert.rho = std::min(rho_1, rho_inf);
    cert.r = std::min(r_1, r_inf);
    cert.verdict = std::min(cert.rho, cert.r) < 1.0 ? CertificateVerdict::CertifiedUnique
                                                    : CertificateVerdict::Uncertified;
    return cert;
}

FactorState sample_in_box(const BoxU& box, std::mt19937_64& rng) {
    FactorState f;
    f.blocks.resize(box.lower.size());
    for (std::size_t t = 0; t < box.lower.size(); ++t) {
        f.blocks[t].resize(box.lower[t].size());
        for (std::size_t s = 0; s < box.lower[t].size(); ++s) {
            double lo = box.lower[t][s];
            double hi = box.upper[t][s];
            if (hi <= lo) {
                f.blocks[t][s] = lo;
            } else if (lo > 0.0) {
                std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
                f.blocks[t][s] = std::exp(u(rng));
            } else {
                std::uniform_real_distribution<double> u(lo, hi);
                f.blocks[t][s] = u(rng);
            }
        }
    }
    return f;
}

FactorState sample_positive_state(const std::vector<std::size_t>& dims, std::mt19937_64& rng,
                                  double lo, double hi) {
    if (!(lo > 0.0) || !(hi >= lo))
        throw InvalidArgument("sample_positive_state: need 0 < lo <= hi");
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    FactorState f;
    f.blocks.reserve(dims.size());
    for (std::size_t d : dims) {
        std::vector<double> block(d);
        for (double& v : block) v = std::exp(u(rng));
        f.blocks.push_back(std::move(block));
    }
    return f;
}

MultiStartCheck multi_start_check(const RatingProblem& problem, const IterationSettings& settings,
                                  std::size_t starts, std::uint64_t seed,
                                  double agreement_tolerance) {
    MultiStartCheck check;
    check.starts = starts;
    check.agreement_tolerance = agreement_tolerance;
    check.all_converged = true;

    std::mt19937_64 rng(seed);
    std::vector<FactorState> limits;
    limits.reserve(starts);
    for (std::size_t s = 0; s < starts; ++s) {
        FactorState f0 = sample_positive_state(problem.dims(), rng);
        IterationTrace trace = iterate(problem, f0, settings);
        if (!trace.converged) check.all_converged = false;
        limits.push_back(trace.last());
    }
    for (std::size_t a = 0; a < limits.size(); ++a)
        for (std::size_t b = a + 1; b < limits.size(); ++b)
            check.max_pair_distance =
                std::max(check.max_pair_distance, max_abs_difference(limits[a], limits[b]));
    check.agree = check.all_converged && check.max_pair_distance <= agreement_tolerance;
    if (!limits.empty()) check.limit = limits.front();
    return check;
}

}  // namespace ratefix
