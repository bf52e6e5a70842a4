#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsbandit/bounds.hpp"
#include "tsbandit/numerics.hpp"
#include "tsbandit/policy.hpp"
#include "tsbandit/quadrature.hpp"
#include "tsbandit/rng.hpp"
#include "tsbandit/sim.hpp"

namespace tsb {

// One checked inequality lhs <= rhs. margin = rhs - lhs; pass means
// margin >= -tolerance.
struct VerificationReport {
    std::string check;
    std::string inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string method;

    static VerificationReport make(std::string check, std::string inputs,
                                   double lhs, double rhs, double tolerance,
                                   std::string method) {
        VerificationReport r;
        r.check = std::move(check);
        r.inputs = std::move(inputs);
        r.lhs = lhs;
        r.rhs = rhs;
        r.margin = rhs - lhs;
        r.tolerance = tolerance;
        r.pass = r.margin >= -tolerance;
        r.method = std::move(method);
        return r;
    }
};

struct CheckSummary {
    std::string name;
    bool passed = true;
    std::vector<VerificationReport> reports;
    std::map<std::string, double> measured;

    void add(VerificationReport r) {
        passed = passed && r.pass;
        reports.push_back(std::move(r));
    }
};

// Snapshot of per-arm posteriors at one decision point. Arm 0 plays the role
// of the optimal arm.
struct PosteriorProfile {
    std::vector<ArmPosterior> posteriors;
    std::size_t target_arm = 1;  // the suboptimal arm whose events are cut
    double y = 0.5;              // sample-event threshold, in (0,1)
};

namespace detail {

inline double logaddexp(double a, double b) {
    if (a == -kInfinity) return b;
    if (b == -kInfinity) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Beta(alpha,beta) CDF as an explicit polynomial sum with precomputed
// log-coefficients; the quadrature integrands evaluate it thousands of times.
class BetaPolyCdf {
  public:
    BetaPolyCdf(std::int64_t alpha, std::int64_t beta)
        : alpha_(alpha), n_(alpha + beta - 1) {
        log_coef_.reserve(static_cast<std::size_t>(n_ - alpha_ + 1));
        for (std::int64_t u = alpha_; u <= n_; ++u)
            log_coef_.push_back(std::lgamma(static_cast<double>(n_) + 1.0) -
                                std::lgamma(static_cast<double>(u) + 1.0) -
                                std::lgamma(static_cast<double>(n_ - u) + 1.0));
    }

    double operator()(double v) const {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        const double lv = std::log(v);
        const double l1v = std::log1p(-v);
        double sum = 0.0;
        for (std::int64_t u = alpha_; u <= n_; ++u) {
            const double nu = static_cast<double>(n_ - u);
            sum += std::exp(log_coef_[static_cast<std::size_t>(u - alpha_)] +
                            static_cast<double>(u) * lv + nu * l1v);
        }
        return std::min(sum, 1.0);
    }

  private:
    std::int64_t alpha_;
    std::int64_t n_;
    std::vector<double> log_coef_;
};

inline void validate_profile(const PosteriorProfile& profile) {
    if (profile.posteriors.size() < 2)
        throw std::domain_error("PosteriorProfile: need at least two arms");
    if (profile.target_arm == 0 ||
        profile.target_arm >= profile.posteriors.size())
        throw std::domain_error(
            "PosteriorProfile: target arm must be a non-zero arm index");
    if (!(profile.y > 0.0 && profile.y < 1.0))
        throw std::domain_error("PosteriorProfile: y must lie in (0,1)");
    for (const auto& p : profile.posteriors)
        if (p.successes < 0 || p.failures < 0)
            throw std::domain_error("PosteriorProfile: negative counts");
}

}  // namespace detail

// Checks the selection-probability inequality
//   Pr(i(t)=i, theta_i <= y) <= ((1-p)/p) Pr(i(t)=1, theta_i <= y),
// p = Pr(theta_1 > y), by direct quadrature of both sides against the
// posterior densities in the profile.
inline VerificationReport verify_lemma1(const PosteriorProfile& profile,
                                        std::int64_t max_evaluations = 200000,
                                        double tolerance = 1e-8) {
    detail::validate_profile(profile);
    const std::size_t num_arms = profile.posteriors.size();
    const std::size_t target = profile.target_arm;
    const double y = profile.y;

    std::vector<detail::BetaPolyCdf> cdf;
    cdf.reserve(num_arms);
    for (const auto& post : profile.posteriors)
        cdf.emplace_back(post.successes + 1, post.failures + 1);
    const auto pdf = [&](std::size_t arm, double v) {
        return beta_pdf(profile.posteriors[arm].successes + 1,
                        profile.posteriors[arm].failures + 1, v);
    };

    const double quad_tol = 1e-11;
    const auto lhs_integrand = [&](double v) {
        double f = pdf(target, v);
        for (std::size_t j = 0; j < num_arms; ++j)
            if (j != target) f *= cdf[j](v);
        return f;
    };
    const QuadResult lhs_q = integrate_adaptive(lhs_integrand, 0.0, y,
                                                quad_tol, max_evaluations);

    const double p = exact_p(profile.posteriors[0], y);
    const auto rhs_integrand = [&](double v) {
        double f = pdf(0, v) * cdf[target](std::min(v, y));
        for (std::size_t j = 1; j < num_arms; ++j)
            if (j != target) f *= cdf[j](v);
        return f;
    };
    const QuadResult rhs_q = integrate_adaptive(rhs_integrand, 0.0, 1.0,
                                                quad_tol, max_evaluations);
    const double rhs = (1.0 - p) / p * rhs_q.value;

    std::ostringstream inputs;
    inputs << "arms=" << num_arms << " target=" << target << " y=" << y
           << " counts=";
    for (const auto& post : profile.posteriors)
        inputs << "(" << post.successes << "," << post.failures << ")";
    std::ostringstream method;
    method << "gauss-kronrod 7-15, abs_tol=" << quad_tol << ", evals="
           << lhs_q.evaluations + rhs_q.evaluations
           << (lhs_q.converged && rhs_q.converged ? "" : " (budget hit)")
           << ", p=" << p;
    return VerificationReport::make("lemma1", inputs.str(), lhs_q.value, rhs,
                                    tolerance, method.str());
}

// E[1/p_{i,tau_j+1}] = sum_{s=0}^{j} f_{j,mu1}(s) / F_B(j+1, y, s), summed
// exactly in log space. Index convention: j counts completed optimal-arm
// plays, so j=0 is the prior state and gives 1/(1-y).
inline double exact_inverse_p_expectation(std::int64_t j, double mu1,
                                          double y) {
    if (j < 0)
        throw std::domain_error("exact_inverse_p_expectation: j must be >= 0");
    if (!(mu1 > 0.0 && mu1 < 1.0))
        throw std::domain_error(
            "exact_inverse_p_expectation: mu1 must lie in (0,1)");
    if (!(y > 0.0 && y < 1.0))
        throw std::domain_error(
            "exact_inverse_p_expectation: y must lie in (0,1)");
    double log_cdf = -kInfinity;  // running log F_B(j+1, y, s)
    double sum = 0.0, comp = 0.0;
    for (std::int64_t s = 0; s <= j; ++s) {
        log_cdf = detail::logaddexp(log_cdf, log_binomial_pmf(j + 1, y, s));
        const double term =
            std::exp(log_binomial_pmf(j, mu1, s) - log_cdf);
        const double t1 = term - comp;
        const double t2 = sum + t1;
        comp = (t2 - sum) - t1;
        sum = t2;
    }
    return sum;
}

// E[1/p] - 1 = sum_s f_{j,mu1}(s) (1 - F_B(j+1,y,s)) / F_B(j+1,y,s) with the
// complement taken as a log-space upper tail, so the excess stays exact long
// after E itself rounds to 1 and a literal E - 1 would return cancellation
// noise.
inline double exact_inverse_p_excess(std::int64_t j, double mu1, double y) {
    if (j < 0)
        throw std::domain_error("exact_inverse_p_excess: j must be >= 0");
    if (!(mu1 > 0.0 && mu1 < 1.0))
        throw std::domain_error("exact_inverse_p_excess: mu1 must lie in (0,1)");
    if (!(y > 0.0 && y < 1.0))
        throw std::domain_error("exact_inverse_p_excess: y must lie in (0,1)");
    std::vector<double> log_upper(static_cast<std::size_t>(j) + 2);
    log_upper[static_cast<std::size_t>(j) + 1] = -kInfinity;
    for (std::int64_t s = j; s >= 0; --s)
        log_upper[static_cast<std::size_t>(s)] =
            detail::logaddexp(log_upper[static_cast<std::size_t>(s) + 1],
                              log_binomial_pmf(j + 1, y, s + 1));
    double log_cdf = -kInfinity;
    double sum = 0.0, comp = 0.0;
    for (std::int64_t s = 0; s <= j; ++s) {
        log_cdf = detail::logaddexp(log_cdf, log_binomial_pmf(j + 1, y, s));
        const double term =
            std::exp(log_binomial_pmf(j, mu1, s) +
                     log_upper[static_cast<std::size_t>(s)] - log_cdf);
        const double t1 = term - comp;
        const double t2 = sum + t1;
        comp = (t2 - sum) - t1;
        sum = t2;
    }
    return sum;
}

// The four Appendix-D partial sums of f_{j,mu1}(s)/F_B(j+1,y,s) over s.
// Boundary convention: floor(yj) sits in sum2 alone and ceil((mu1-dp/2)j)
// opens sum4, so the four ranges partition [0, j] exactly.
struct PartialSums {
    struct Piece {
        std::int64_t lo = 0;
        std::int64_t hi = -1;  // empty when hi < lo
        double value = 0.0;
    };
    Piece sum1, sum2, sum3, sum4;
    double total = 0.0;  // sum of the four pieces
    double exact = 0.0;  // literal one-pass expectation, same terms
    double delta_prime = 0.0;
    double big_d = 0.0;
};

inline PartialSums partial_sums(std::int64_t j, double mu1, double y) {
    if (j < 0) throw std::domain_error("partial_sums: j must be >= 0");
    if (!(mu1 > 0.0 && mu1 < 1.0 && y > 0.0 && y < mu1))
        throw std::domain_error("partial_sums: need 0 < y < mu1 < 1");
    PartialSums out;
    out.delta_prime = mu1 - y;
    out.big_d = kl_bernoulli(y, mu1);
    const double jd = static_cast<double>(j);
    const std::int64_t b1 = static_cast<std::int64_t>(std::floor(y * jd));
    const std::int64_t s4 = std::max<std::int64_t>(
        static_cast<std::int64_t>(
            std::ceil((mu1 - 0.5 * out.delta_prime) * jd)),
        b1 + 1);
    out.sum1 = {0, b1 - 1, 0.0};
    out.sum2 = {b1, b1, 0.0};
    out.sum3 = {b1 + 1, std::min(s4 - 1, j), 0.0};
    out.sum4 = {s4, j, 0.0};

    // sum4 is reassembled as (1 - mass below s4) + excess so its explicit
    // bound stays checkable at zero tolerance: literal f/F terms drift by
    // ~1e-12 at j ~ 10^4, larger than the bound's true headroom there
    std::vector<double> log_upper;
    if (s4 <= j) {
        log_upper.assign(static_cast<std::size_t>(j) + 2, -kInfinity);
        for (std::int64_t s = j; s >= s4; --s)
            log_upper[static_cast<std::size_t>(s)] = detail::logaddexp(
                log_upper[static_cast<std::size_t>(s) + 1],
                log_binomial_pmf(j + 1, y, s + 1));
    }

    const auto kahan = [](double& acc, double& comp, double term) {
        const double t1 = term - comp;
        const double t2 = acc + t1;
        comp = (t2 - acc) - t1;
        acc = t2;
    };
    double log_cdf = -kInfinity;
    double log_below = -kInfinity;
    double excess = 0.0, excess_comp = 0.0;
    double exact_comp = 0.0;
    double comp[3] = {0.0, 0.0, 0.0};
    PartialSums::Piece* pieces[3] = {&out.sum1, &out.sum2, &out.sum3};
    for (std::int64_t s = 0; s <= j; ++s) {
        log_cdf = detail::logaddexp(log_cdf, log_binomial_pmf(j + 1, y, s));
        const double log_f = log_binomial_pmf(j, mu1, s);
        kahan(out.exact, exact_comp, std::exp(log_f - log_cdf));
        if (s >= s4) {
            kahan(excess, excess_comp,
                  std::exp(log_f +
                           log_upper[static_cast<std::size_t>(s)] - log_cdf));
            continue;
        }
        log_below = detail::logaddexp(log_below, log_f);
        const double term = std::exp(log_f - log_cdf);
        for (int k = 0; k < 3; ++k) {
            if (s < pieces[k]->lo || s > pieces[k]->hi) continue;
            kahan(pieces[k]->value, comp[k], term);
            break;
        }
    }
    if (s4 <= j) out.sum4.value = (1.0 - std::exp(log_below)) + excess;
    out.total =
        out.sum1.value + out.sum2.value + out.sum3.value + out.sum4.value;
    return out;
}

// Lemma 4 regime check at one grid point. Small j (j < 8/delta') must obey
// the explicit 1 + 3/delta' bound with zero tolerance; large j is compared
// against 1 + theta_constant * three-term decay.
inline VerificationReport lemma4_check(
    std::int64_t j, double mu1, double y,
    double theta_constant = kThetaEnvelopeConstant) {
    if (!(mu1 > 0.0 && mu1 < 1.0 && y > 0.0 && y < mu1))
        throw std::domain_error("lemma4_check: need 0 < y < mu1 < 1");
    const double dp = mu1 - y;
    const double big_d = kl_bernoulli(y, mu1);
    const bool small = static_cast<double>(j) < 8.0 / dp;
    // large regime compares the cancellation-free excess, so deep-tail points
    // are not swamped by the rounding of E itself
    const double value = small ? exact_inverse_p_expectation(j, mu1, y)
                               : exact_inverse_p_excess(j, mu1, y);
    const double bound =
        small ? 1.0 + 3.0 / dp
              : theta_constant * detail::theta_three_term(
                                     dp, big_d, static_cast<double>(j));
    std::ostringstream inputs;
    inputs << "j=" << j << " mu1=" << mu1 << " y=" << y << " regime="
           << (small ? "small" : "large");
    std::ostringstream method;
    method << "exact log-space sum; convention k1=j (appendix display writes "
              "tau_{j+1})";
    if (!small) method << "; excess form; theta=" << theta_constant;
    return VerificationReport::make("lemma4", inputs.str(), value, bound,
                                    small ? 0.0 : 1e-9, method.str());
}

// Ratio of the exact low-tail binomial CDF to its two-sided estimate,
// computed in log space so deep tails stay finite.
inline double jerabek_ratio(std::int64_t n, double y, std::int64_t s) {
    if (!jerabek_low_regime(n, y, s))
        throw std::domain_error("jerabek_ratio: (n,y,s) not in the low regime");
    return std::exp(log_binomial_cdf(n, y, s) -
                    log_jerabek_cdf_estimate(n, y, s));
}

struct JerabekStudy {
    double min_ratio = kInfinity;
    double max_ratio = 0.0;
    std::int64_t min_n = 0, min_s = 0;
    std::int64_t max_n = 0, max_s = 0;
    double min_y = 0.0, max_y = 0.0;
    std::int64_t points = 0;
};

// Sweeps every low-regime s for n in [n_lo, n_hi] and the given y grid.
inline JerabekStudy jerabek_ratio_study(std::int64_t n_lo, std::int64_t n_hi,
                                        const std::vector<double>& y_grid) {
    if (n_lo < 1 || n_hi < n_lo)
        throw std::domain_error("jerabek_ratio_study: bad n range");
    JerabekStudy study;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        for (double y : y_grid) {
            double log_cdf = -kInfinity;
            for (std::int64_t s = 0; s <= n; ++s) {
                log_cdf =
                    detail::logaddexp(log_cdf, log_binomial_pmf(n, y, s));
                if (!jerabek_low_regime(n, y, s)) break;
                const double ratio =
                    std::exp(log_cdf - log_jerabek_cdf_estimate(n, y, s));
                ++study.points;
                if (ratio < study.min_ratio) {
                    study.min_ratio = ratio;
                    study.min_n = n;
                    study.min_s = s;
                    study.min_y = y;
                }
                if (ratio > study.max_ratio) {
                    study.max_ratio = ratio;
                    study.max_n = n;
                    study.max_s = s;
                    study.max_y = y;
                }
            }
        }
    }
    return study;
}

// --- check-suite runners -------------------------------------------------
// Each runner sweeps one lemma or fact over its standard grid and returns a
// CheckSummary; the CLI `verify` subcommand and the acceptance harness both
// drive these.

// Beta-Binomial identity against direct quadrature of the Beta pdf.
inline CheckSummary check_fact3_identity(std::int64_t shape_max = 100,
                                         double abs_tol = 1e-10) {
    CheckSummary summary;
    summary.name = "fact3_identity";
    double max_diff = 0.0;
    std::int64_t worst_alpha = 0, worst_beta = 0;
    double worst_y = 0.0;
    for (std::int64_t alpha = 1; alpha <= shape_max; ++alpha) {
        for (std::int64_t beta = 1; beta <= shape_max; ++beta) {
            const auto pdf = [&](double v) { return beta_pdf(alpha, beta, v); };
            double cumulative = 0.0;
            double prev_y = 0.0;
            for (int step = 1; step <= 19; ++step) {
                const double y = 0.05 * step;
                cumulative +=
                    integrate_adaptive(pdf, prev_y, y, 2e-12, 20000).value;
                prev_y = y;
                const double diff =
                    std::abs(beta_cdf(alpha, beta, y) - cumulative);
                if (diff > max_diff) {
                    max_diff = diff;
                    worst_alpha = alpha;
                    worst_beta = beta;
                    worst_y = y;
                }
            }
        }
    }
    std::ostringstream inputs;
    inputs << "alpha,beta in 1.." << shape_max << "; y in 0.05..0.95 step "
           << "0.05; worst at (" << worst_alpha << "," << worst_beta << ",y="
           << worst_y << ")";
    summary.add(VerificationReport::make(
        "fact3_identity", inputs.str(), max_diff, abs_tol, 0.0,
        "identity vs piecewise gauss-kronrod, piece abs_tol=2e-12"));
    summary.measured["max_abs_diff"] = max_diff;
    return summary;
}

// Threshold solver residuals and ordering over random triples.
inline CheckSummary check_threshold_solvers(std::int64_t trials = 1000,
                                            std::uint64_t seed = 12345,
                                            double rel_tol = 1e-12) {
    CheckSummary summary;
    summary.name = "threshold_solvers";
    RandomStream stream = derive_stream({seed, 0, "solver-check"});
    double max_residual = 0.0;
    std::int64_t ordering_failures = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        const double mu_i = 0.02 + 0.91 * stream.uniform();
        const double max_gap = 0.97 - mu_i;
        const double gap = 0.01 + (max_gap - 0.01) * stream.uniform();
        const double mu_1 = mu_i + gap;
        const double eps = 0.05 + 0.95 * stream.uniform();
        const double x = solve_x_threshold(mu_i, mu_1, eps);
        const double y = solve_y_threshold(x, mu_1, eps);
        const double d1 = kl_bernoulli(mu_i, mu_1);
        const double dx = kl_bernoulli(x, mu_1);
        const double r1 = std::abs(dx * (1.0 + eps) - d1) / d1;
        const double r2 =
            std::abs(kl_bernoulli(x, y) * (1.0 + eps) - dx) / dx;
        max_residual = std::max(max_residual, std::max(r1, r2));
        if (!(mu_i < x && x < y && y < mu_1)) ++ordering_failures;
    }
    std::ostringstream inputs;
    inputs << trials << " random triples, seed=" << seed;
    summary.add(VerificationReport::make(
        "solver_residual", inputs.str(), max_residual, rel_tol, 0.0,
        "bisection, relative residual of both defining equations"));
    summary.add(VerificationReport::make(
        "solver_ordering", inputs.str(),
        static_cast<double>(ordering_failures), 0.0, 0.0,
        "count of triples violating mu_i < x < y < mu_1"));
    summary.measured["max_relative_residual"] = max_residual;
    return summary;
}

// Random posterior profiles for the selection-probability inequality.
inline CheckSummary check_lemma1_profiles(std::int64_t profiles = 50,
                                          std::uint64_t seed = 777,
                                          std::int64_t max_counts = 50,
                                          double tolerance = 1e-8) {
    CheckSummary summary;
    summary.name = "lemma1_profiles";
    RandomStream stream = derive_stream({seed, 0, "lemma1-check"});
    const std::size_t arm_choices[3] = {2, 3, 5};
    for (std::int64_t k = 0; k < profiles; ++k) {
        PosteriorProfile profile;
        const std::size_t num_arms =
            arm_choices[static_cast<std::size_t>(k % 3)];
        profile.posteriors.resize(num_arms);
        for (auto& post : profile.posteriors) {
            post.successes = static_cast<std::int64_t>(
                stream.uniform() * static_cast<double>(max_counts + 1));
            post.failures = static_cast<std::int64_t>(
                stream.uniform() * static_cast<double>(max_counts + 1));
        }
        profile.target_arm =
            1 + static_cast<std::size_t>(stream.uniform() *
                                         static_cast<double>(num_arms - 1));
        profile.y = 0.1 + 0.8 * stream.uniform();
        summary.add(verify_lemma1(profile, 200000, tolerance));
    }
    return summary;
}

namespace detail {

inline const std::vector<double>& lemma4_mu1_grid() {
    static const std::vector<double> grid = {0.3, 0.4, 0.5, 0.6, 0.7,
                                             0.8, 0.9};
    return grid;
}

inline const std::vector<double>& lemma4_dp_grid() {
    static const std::vector<double> grid = {0.05, 0.1, 0.2};
    return grid;
}

// Log-spaced j values (ratio ~1.15) from lo to hi inclusive, deduplicated.
inline std::vector<std::int64_t> log_spaced_j(std::int64_t lo,
                                              std::int64_t hi) {
    std::vector<std::int64_t> out;
    double v = static_cast<double>(lo);
    while (v < static_cast<double>(hi)) {
        const std::int64_t jv = static_cast<std::int64_t>(std::llround(v));
        if (out.empty() || jv > out.back()) out.push_back(jv);
        v *= 1.15;
    }
    if (out.empty() || out.back() < hi) out.push_back(hi);
    return out;
}

}  // namespace detail

// Small-j regime: exact expectation under the explicit 1 + 3/delta' bound,
// zero tolerance, every j below the cutoff.
inline CheckSummary check_lemma4_small_j() {
    CheckSummary summary;
    summary.name = "lemma4_small_j";
    for (double mu1 : detail::lemma4_mu1_grid()) {
        for (double dp : detail::lemma4_dp_grid()) {
            const double y = mu1 - dp;
            const std::int64_t j_cut =
                static_cast<std::int64_t>(std::ceil(8.0 / dp));
            double worst = 0.0;
            std::int64_t worst_j = 0;
            for (std::int64_t j = 0; j < j_cut; ++j) {
                const double value = exact_inverse_p_expectation(j, mu1, y);
                if (value > worst) {
                    worst = value;
                    worst_j = j;
                }
            }
            std::ostringstream inputs;
            inputs << "mu1=" << mu1 << " dp=" << dp << " j<" << j_cut
                   << " worst_j=" << worst_j;
            summary.add(VerificationReport::make(
                "lemma4_small", inputs.str(), worst, 1.0 + 3.0 / dp, 0.0,
                "exact log-space sums over all j below 8/delta'"));
        }
    }
    return summary;
}

struct EnvelopeStudy {
    double constant = 0.0;           // max ratio, full j grid
    double constant_small = 0.0;     // max ratio, j <= 1e3
    double stability = 0.0;          // constant / constant_small
    double worst_mu1 = 0.0, worst_dp = 0.0;
    std::int64_t worst_j = 0;
};

// Measures the envelope constant max (E[1/p]-1) / three-term over the grid.
inline EnvelopeStudy lemma4_envelope_study(std::int64_t j_max = 10000) {
    EnvelopeStudy study;
    for (double mu1 : detail::lemma4_mu1_grid()) {
        for (double dp : detail::lemma4_dp_grid()) {
            const double y = mu1 - dp;
            const double big_d = kl_bernoulli(y, mu1);
            const std::int64_t j_cut =
                static_cast<std::int64_t>(std::ceil(8.0 / dp));
            for (std::int64_t j : detail::log_spaced_j(j_cut, j_max)) {
                const double excess = exact_inverse_p_excess(j, mu1, y);
                const double three = detail::theta_three_term(
                    dp, big_d, static_cast<double>(j));
                if (three <= 0.0) continue;  // both sides underflowed
                const double ratio = excess / three;
                if (j <= 1000)
                    study.constant_small =
                        std::max(study.constant_small, ratio);
                if (ratio > study.constant) {
                    study.constant = ratio;
                    study.worst_mu1 = mu1;
                    study.worst_dp = dp;
                    study.worst_j = j;
                }
            }
        }
    }
    study.stability = study.constant_small > 0.0
                          ? study.constant / study.constant_small
                          : kInfinity;
    return study;
}

// Large-j envelope: the measured constant must be finite, stable between the
// j <= 1e3 and j <= 1e4 grids, and covered by the shipped constant.
inline CheckSummary check_lemma4_envelope(
    std::int64_t j_max = 10000,
    double theta_constant = kThetaEnvelopeConstant) {
    CheckSummary summary;
    summary.name = "lemma4_envelope";
    const EnvelopeStudy study = lemma4_envelope_study(j_max);
    std::ostringstream inputs;
    inputs << "grid mu1 0.3..0.9, dp {0.05,0.1,0.2}, log-spaced j to "
           << j_max << "; worst (mu1=" << study.worst_mu1
           << ", dp=" << study.worst_dp << ", j=" << study.worst_j << ")";
    summary.add(VerificationReport::make(
        "envelope_coverage", inputs.str(), study.constant, theta_constant,
        0.0, "measured max (E[1/p]-1)/three-term vs shipped constant"));
    summary.add(VerificationReport::make(
        "envelope_stability", inputs.str(), study.stability, 2.0, 0.0,
        "max ratio over full grid / max ratio over j <= 1e3"));
    summary.measured["envelope_constant"] = study.constant;
    summary.measured["envelope_constant_j1e3"] = study.constant_small;
    summary.measured["stability"] = study.stability;
    return summary;
}

// Partition identity and the two explicit partial-sum bounds.
inline CheckSummary check_partial_sums(std::int64_t j_max = 10000,
                                       double rel_tol = 1e-10) {
    CheckSummary summary;
    summary.name = "partial_sums";
    double worst_identity = 0.0;
    double worst_sum2_margin = kInfinity;
    double worst_sum4_margin = kInfinity;
    std::string worst_id_at, worst_s2_at, worst_s4_at;
    for (double mu1 : detail::lemma4_mu1_grid()) {
        for (double dp : detail::lemma4_dp_grid()) {
            const double y = mu1 - dp;
            const std::int64_t j_cut =
                static_cast<std::int64_t>(std::ceil(8.0 / dp));
            for (std::int64_t j : detail::log_spaced_j(1, j_max)) {
                const PartialSums ps = partial_sums(j, mu1, y);
                const double exact =
                    exact_inverse_p_expectation(j, mu1, y);
                const double residual =
                    std::abs(ps.total - exact) / exact;
                std::ostringstream at;
                at << "mu1=" << mu1 << " dp=" << dp << " j=" << j;
                if (residual > worst_identity) {
                    worst_identity = residual;
                    worst_id_at = at.str();
                }
                if (j < j_cut) continue;  // bounds are large-j statements
                const double jd = static_cast<double>(j);
                const double s2_margin =
                    3.0 * std::exp(-ps.big_d * jd) - ps.sum2.value;
                if (s2_margin < worst_sum2_margin) {
                    worst_sum2_margin = s2_margin;
                    worst_s2_at = at.str();
                }
                const double s4_margin =
                    1.0 + 1.0 / std::expm1(0.25 * dp * dp * jd) -
                    ps.sum4.value;
                if (s4_margin < worst_sum4_margin) {
                    worst_sum4_margin = s4_margin;
                    worst_s4_at = at.str();
                }
            }
        }
    }
    summary.add(VerificationReport::make(
        "partition_identity", "worst at " + worst_id_at, worst_identity,
        rel_tol, 0.0, "four partial sums vs exact expectation, relative"));
    summary.add(VerificationReport::make(
        "sum2_bound", "worst at " + worst_s2_at, -worst_sum2_margin, 0.0,
        0.0, "sum2 <= 3 exp(-D j), margin sign flipped"));
    summary.add(VerificationReport::make(
        "sum4_bound", "worst at " + worst_s4_at, -worst_sum4_margin, 0.0,
        0.0, "sum4 <= 1 + 1/(exp(dp^2 j/4)-1), margin sign flipped"));
    summary.measured["worst_identity_residual"] = worst_identity;
    summary.measured["worst_sum2_margin"] = worst_sum2_margin;
    summary.measured["worst_sum4_margin"] = worst_sum4_margin;
    return summary;
}

// CDF-estimate ratio sweep; expected interval from the pilot study.
inline CheckSummary check_jerabek_ratios(std::int64_t n_lo = 10,
                                         std::int64_t n_hi = 1000,
                                         double expect_lo = 0.1,
                                         double expect_hi = 10.0) {
    CheckSummary summary;
    summary.name = "jerabek_ratios";
    std::vector<double> y_grid;
    for (int k = 1; k <= 9; ++k) y_grid.push_back(0.1 * k);
    const JerabekStudy study = jerabek_ratio_study(n_lo, n_hi, y_grid);
    std::ostringstream inputs;
    inputs << "n in " << n_lo << ".." << n_hi << ", y in 0.1..0.9, "
           << study.points << " low-regime points; min at (n=" << study.min_n
           << ",y=" << study.min_y << ",s=" << study.min_s << "), max at (n="
           << study.max_n << ",y=" << study.max_y << ",s=" << study.max_s
           << ")";
    summary.add(VerificationReport::make(
        "jerabek_ratio_low", inputs.str(), expect_lo, study.min_ratio, 0.0,
        "exact/estimate must stay above the pilot floor"));
    summary.add(VerificationReport::make(
        "jerabek_ratio_high", inputs.str(), study.max_ratio, expect_hi, 0.0,
        "exact/estimate must stay below the pilot ceiling"));
    summary.measured["min_ratio"] = study.min_ratio;
    summary.measured["max_ratio"] = study.max_ratio;
    return summary;
}

// Compares the tracked event tallies of a finished experiment against the
// play-count lemmas: mean count of plays with the empirical-mean event
// violated <= 1/d(x,mu_i) + 1, and with the sample event violated <=
// L_i(T) + 1, each with a 3*SE statistical allowance.
inline std::vector<VerificationReport> verify_lemma23_from_logs(
    const AggregateResult& agg, const ExperimentConfig& config) {
    if (config.event_tracking == EventTracking::off)
        throw std::domain_error(
            "verify_lemma23_from_logs: experiment ran without event tracking");
    if (agg.mean_emu_fail.empty())
        throw std::domain_error(
            "verify_lemma23_from_logs: aggregate lacks event tallies");
    const BanditInstance& inst = config.instance;
    const std::vector<ThresholdPair> thresholds = detail::tracking_thresholds(
        inst, config.event_tracking, config.eps);
    std::vector<VerificationReport> reports;
    for (std::size_t i = 0; i < inst.num_arms(); ++i) {
        if (i == inst.optimal_index) continue;
        const ThresholdPair& th = thresholds[i];
        std::ostringstream in2;
        in2 << "arm=" << i << " x=" << th.x << " y=" << th.y
            << " T=" << config.horizon << " runs=" << agg.num_runs;
        reports.push_back(VerificationReport::make(
            "lemma2", in2.str(), agg.mean_emu_fail[i],
            1.0 / th.d_x_mu + 1.0 + 3.0 * agg.se_emu_fail[i], 0.0,
            "mean over runs; rhs = 1/d(x,mu_i) + 1 + 3*SE"));
        reports.push_back(VerificationReport::make(
            "lemma3", in2.str(), agg.mean_etheta_fail[i],
            th.plays_scale(static_cast<double>(config.horizon)) + 1.0 +
                3.0 * agg.se_etheta_fail[i],
            0.0, "mean over runs; rhs = ln T/d(x,y) + 1 + 3*SE"));
    }
    return reports;
}

// Runs a tracked experiment and applies the lemma 2/3 tally comparison. The
// aggregate is returned through out_agg when the caller wants to reuse the
// simulation (the regret criteria share it).
inline CheckSummary check_lemma23_simulation(const ExperimentConfig& config,
                                             int workers = 1,
                                             AggregateResult* out_agg =
                                                 nullptr) {
    CheckSummary summary;
    summary.name = "lemma23_empirical";
    const AggregateResult agg = run_experiment(config, workers);
    for (auto& report : verify_lemma23_from_logs(agg, config))
        summary.add(std::move(report));
    if (out_agg) *out_agg = agg;
    return summary;
}

}  // namespace tsb
