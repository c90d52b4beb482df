#pragma once

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "ratefix/factor_state.hpp"
#include "ratefix/iteration.hpp"
#include "ratefix/norms.hpp"
#include "ratefix/rating.hpp"

namespace ratefix {

/// Coordinatewise interval box that one sweep of the re-rating map provably
/// lands in: per block t and slice s,
///   lower = l_s mu_base / (l_base M_s),  upper = l_s M_base / (l_base mu_s),
/// where mu/M are the min/max exposure over the slice.
struct BoxU {
    std::vector<std::vector<double>> lower;
    std::vector<std::vector<double>> upper;

    bool contains(const FactorState& f, double relative_slack = 0.0) const;
};

enum class CertificateVerdict { CertifiedUnique, Uncertified };

/// The four a-priori contraction bounds. Any of them below 1 certifies a
/// unique fixed point and global convergence from any positive start.
struct ConvergenceCertificate {
    double rho_inf = 0.0;
    double rho_1 = 0.0;
    double r_inf = 0.0;
    double r_1 = 0.0;
    double rho = 0.0;  // min(rho_1, rho_inf)
    double r = 0.0;    // min(r_1, r_inf)
    CertificateVerdict verdict = CertificateVerdict::Uncertified;
    BoxU box;

    bool certified() const { return verdict == CertificateVerdict::CertifiedUnique; }
};

/// Works for any number of factors. Throws ZeroExposure when a slice
/// exposure minimum is zero (the box would be unbounded).
BoxU compute_box(const RatingProblem& problem);

/// Analytic Jacobian of the re-rating map at f, laid out in block order
/// (x; y; z). Diagonal blocks are identically zero. Three factors only.
///
/// With fixed_base_coordinates the columns of the base coordinates (the
/// first coordinate of each block) are zeroed, i.e. the Jacobian of the map
/// restricted to states whose base entries are held constant. The contraction
/// certificates bound this reduced Jacobian; the full variant carries the
/// analytic quotient-rule values in those columns.
Matrix jacobian(const RatingProblem& problem, const FactorState& f,
                bool fixed_base_coordinates = false);

/// (rho_inf, rho_1): slicewise contraction bounds. Three factors only.
std::pair<double, double> rho_certificates(const RatingProblem& problem);

/// (r_inf, r_1): coarser bounds from the global exposure extremes.
/// Always >= the corresponding rho bound. Three factors only.
std::pair<double, double> r_certificates(const RatingProblem& problem);

/// Bundles box, all four bounds and the verdict.
ConvergenceCertificate certify(const RatingProblem& problem);

/// Log-uniform sample within the box, one coordinate at a time.
FactorState sample_in_box(const BoxU& box, std::mt19937_64& rng);

/// Positive state with coordinates log-uniform in [lo, hi].
FactorState sample_positive_state(const std::vector<std::size_t>& dims, std::mt19937_64& rng,
                                  double lo = 1e-2, double hi = 1e2);

/// Empirical convergence check for problems the closed-form certificates do
/// not cover: iterate from `starts` random positive initial states and test
/// that every run converges and all limits agree.
struct MultiStartCheck {
    std::size_t starts = 0;
    bool all_converged = false;
    double max_pair_distance = 0.0;  // infinity-norm over all limit pairs
    double agreement_tolerance = 0.0;
    bool agree = false;
    FactorState limit;  // limit of the first start (when any converged)
};

MultiStartCheck multi_start_check(const RatingProblem& problem, const IterationSettings& settings,
                                  std::size_t starts, std::uint64_t seed,
                                  double agreement_tolerance = 1e-8);

}  // namespace ratefix
