#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace tsb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Bernoulli KL divergence d(a,b) in nats. Infinite when b is degenerate and a
// disagrees; never negative.
inline double kl_bernoulli(double a, double b) {
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
        throw std::domain_error("kl_bernoulli: arguments must lie in [0,1]");
    if (a == b) return 0.0;
    if (b == 0.0 || b == 1.0) return kInfinity;
    double d = 0.0;
    if (a == 0.0) {
        d = -std::log1p(-b);
    } else if (a == 1.0) {
        d = -std::log(b);
    } else {
        d = a * std::log1p((a - b) / b) +
            (1.0 - a) * std::log1p((b - a) / (1.0 - b));
    }
    return std::max(d, 0.0);
}

// log of C(n,s) p^s (1-p)^(n-s); -inf where the mass is zero.
inline double log_binomial_pmf(std::int64_t n, double p, std::int64_t s) {
    if (n < 0 || s < 0 || s > n)
        throw std::domain_error("log_binomial_pmf: need 0 <= s <= n");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("log_binomial_pmf: p must lie in [0,1]");
    if (p == 0.0) return s == 0 ? 0.0 : -kInfinity;
    if (p == 1.0) return s == n ? 0.0 : -kInfinity;
    const double nn = static_cast<double>(n);
    const double ss = static_cast<double>(s);
    return std::lgamma(nn + 1.0) - std::lgamma(ss + 1.0) -
           std::lgamma(nn - ss + 1.0) + ss * std::log(p) +
           (nn - ss) * std::log1p(-p);
}

namespace detail {

// log of sum_{s=lo..hi} pmf(n,p,s), rescaled by the largest term. Terms are
// accumulated outward from the mode with Kahan compensation and dropped once
// they stop contributing at double precision.
inline double log_sum_pmf_range(std::int64_t n, double p, std::int64_t lo,
                                std::int64_t hi) {
    if (lo > hi) return -kInfinity;
    if (p == 0.0) return lo == 0 ? 0.0 : -kInfinity;
    if (p == 1.0) return hi == n ? 0.0 : -kInfinity;
    const std::int64_t mode = std::clamp(
        static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1.0) * p)),
        lo, hi);
    const double log_max = log_binomial_pmf(n, p, mode);
    double sum = 0.0, comp = 0.0;
    const auto add = [&](double term) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    constexpr double kDropBelow = -45.0;
    for (std::int64_t s = mode; s >= lo; --s) {
        const double lt = log_binomial_pmf(n, p, s) - log_max;
        if (lt < kDropBelow) break;
        add(std::exp(lt));
    }
    for (std::int64_t s = mode + 1; s <= hi; ++s) {
        const double lt = log_binomial_pmf(n, p, s) - log_max;
        if (lt < kDropBelow) break;
        add(std::exp(lt));
    }
    return log_max + std::log(sum);
}

}  // namespace detail

// log of the lower tail Pr(X <= s), X ~ Binomial(n,p). Stable far into the
// tail where the plain CDF underflows.
inline double log_binomial_cdf(std::int64_t n, double p, std::int64_t s) {
    if (n < 0) throw std::domain_error("log_binomial_cdf: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("log_binomial_cdf: p must lie in [0,1]");
    if (s < 0) return -kInfinity;
    if (s >= n) return 0.0;
    return detail::log_sum_pmf_range(n, p, 0, s);
}

// Pr(X <= s) for X ~ Binomial(n,p). Evaluates the shorter tail in log space.
inline double binomial_cdf(std::int64_t n, double p, std::int64_t s) {
    if (n < 0) throw std::domain_error("binomial_cdf: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binomial_cdf: p must lie in [0,1]");
    if (s < 0) return 0.0;
    if (s >= n) return 1.0;
    if (static_cast<double>(s) < static_cast<double>(n) * p) {
        return std::min(1.0, std::exp(detail::log_sum_pmf_range(n, p, 0, s)));
    }
    const double upper = std::exp(detail::log_sum_pmf_range(n, p, s + 1, n));
    return std::clamp(1.0 - upper, 0.0, 1.0);
}

// CDF of Beta(alpha,beta) with positive integer shapes, through the
// Beta-Binomial identity: F(y) = 1 - F_B(alpha+beta-1, y, alpha-1), evaluated
// as the upper binomial tail so no cancellation occurs.
inline double beta_cdf(std::int64_t alpha, std::int64_t beta, double y) {
    if (alpha < 1 || beta < 1)
        throw std::domain_error("beta_cdf: shapes must be positive integers");
    if (!(y >= 0.0 && y <= 1.0))
        throw std::domain_error("beta_cdf: y must lie in [0,1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    const std::int64_t n = alpha + beta - 1;
    return std::min(1.0,
                    std::exp(detail::log_sum_pmf_range(n, y, alpha, n)));
}

inline double log_beta_pdf(std::int64_t alpha, std::int64_t beta, double v) {
    if (alpha < 1 || beta < 1)
        throw std::domain_error("log_beta_pdf: shapes must be positive integers");
    if (!(v >= 0.0 && v <= 1.0))
        throw std::domain_error("log_beta_pdf: v must lie in [0,1]");
    const double a = static_cast<double>(alpha);
    const double b = static_cast<double>(beta);
    const double log_norm =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double lp = log_norm;
    if (alpha != 1) {
        if (v == 0.0) return -kInfinity;
        lp += (a - 1.0) * std::log(v);
    }
    if (beta != 1) {
        if (v == 1.0) return -kInfinity;
        lp += (b - 1.0) * std::log1p(-v);
    }
    return lp;
}

inline double beta_pdf(std::int64_t alpha, std::int64_t beta, double v) {
    return std::exp(log_beta_pdf(alpha, beta, v));
}

enum class TailDirection { lower, upper };

// Chernoff bound with KL rate: Pr(sample mean deviates by lambda) <=
// exp(-n d(mu +/- lambda, mu)).
inline double chernoff_kl_bound(std::int64_t n, double mu, double lambda,
                                TailDirection dir) {
    if (n < 1) throw std::domain_error("chernoff_kl_bound: n must be >= 1");
    if (!(mu >= 0.0 && mu <= 1.0))
        throw std::domain_error("chernoff_kl_bound: mu must lie in [0,1]");
    const double room = dir == TailDirection::upper ? 1.0 - mu : mu;
    if (!(lambda > 0.0 && lambda < room))
        throw std::domain_error(
            "chernoff_kl_bound: lambda must satisfy 0 < lambda < "
            "(upper ? 1-mu : mu)");
    const double shifted =
        dir == TailDirection::upper ? mu + lambda : mu - lambda;
    return std::exp(-static_cast<double>(n) * kl_bernoulli(shifted, mu));
}

// Hoeffding bound for a sum of n [0,1] variables deviating by a:
// exp(-2 a^2 / n).
inline double hoeffding_bound(std::int64_t n, double a) {
    if (n < 1) throw std::domain_error("hoeffding_bound: n must be >= 1");
    if (!(a >= 0.0)) throw std::domain_error("hoeffding_bound: a must be >= 0");
    return std::exp(-2.0 * a * a / static_cast<double>(n));
}

// Low-tail regime of the binomial CDF estimate: s at least one standard
// deviation below the mean.
inline bool jerabek_low_regime(std::int64_t n, double y, std::int64_t s) {
    if (n < 1) throw std::domain_error("jerabek_low_regime: n must be >= 1");
    if (!(y > 0.0 && y < 1.0))
        throw std::domain_error("jerabek_low_regime: y must lie in (0,1)");
    if (s < 0 || s > n)
        throw std::domain_error("jerabek_low_regime: need 0 <= s <= n");
    const double nn = static_cast<double>(n);
    return static_cast<double>(s) <= y * nn - std::sqrt(nn * y * (1.0 - y));
}

// log of the two-sided CDF estimate: (y(n-s)/(yn-s)) * pmf(n,y,s) in the low
// regime, constant 1 otherwise.
inline double log_jerabek_cdf_estimate(std::int64_t n, double y,
                                       std::int64_t s) {
    if (!jerabek_low_regime(n, y, s)) return 0.0;
    const double nn = static_cast<double>(n);
    const double ss = static_cast<double>(s);
    return std::log(y * (nn - ss)) - std::log(y * nn - ss) +
           log_binomial_pmf(n, y, s);
}

inline double jerabek_cdf_estimate(std::int64_t n, double y, std::int64_t s) {
    return std::exp(log_jerabek_cdf_estimate(n, y, s));
}

namespace detail {

// Bisection for a monotone g on [lo,hi] with a sign change. Stops when the
// residual is below tol or the bracket collapses to adjacent doubles.
template <typename G>
double bisect(G&& g, double lo, double hi, double g_lo, double tol) {
    double best = 0.5 * (lo + hi);
    double best_abs = kInfinity;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double val = g(mid);
        if (std::abs(val) < best_abs) {
            best = mid;
            best_abs = std::abs(val);
        }
        if (best_abs <= tol) return best;
        if ((val > 0.0) == (g_lo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

}  // namespace detail

// Solves d(x, mu_1) = d(mu_i, mu_1) / (1+eps) for x in (mu_i, mu_1).
inline double solve_x_threshold(double mu_i, double mu_1, double eps) {
    if (!(mu_i >= 0.0 && mu_1 <= 1.0 && mu_i < mu_1))
        throw std::domain_error(
            "solve_x_threshold: need 0 <= mu_i < mu_1 <= 1");
    if (!(eps > 0.0))
        throw std::domain_error("solve_x_threshold: eps must be positive");
    const double target = kl_bernoulli(mu_i, mu_1) / (1.0 + eps);
    if (!std::isfinite(target) || target <= 0.0)
        throw std::domain_error(
            "solve_x_threshold: d(mu_i, mu_1) must be finite and positive");
    const auto g = [&](double x) { return kl_bernoulli(x, mu_1) - target; };
    return detail::bisect(g, mu_i, mu_1, g(mu_i), 1e-12 * target);
}

// Solves d(x, y) = d(x, mu_1) / (1+eps) for y in (x, mu_1).
inline double solve_y_threshold(double x, double mu_1, double eps) {
    if (!(x >= 0.0 && mu_1 <= 1.0 && x < mu_1))
        throw std::domain_error("solve_y_threshold: need 0 <= x < mu_1 <= 1");
    if (!(eps > 0.0))
        throw std::domain_error("solve_y_threshold: eps must be positive");
    const double target = kl_bernoulli(x, mu_1) / (1.0 + eps);
    if (!std::isfinite(target) || target <= 0.0)
        throw std::domain_error(
            "solve_y_threshold: d(x, mu_1) must be finite and positive");
    const auto g = [&](double y) { return kl_bernoulli(x, y) - target; };
    return detail::bisect(g, x, mu_1, -1.0, 1e-12 * target);
}

// Analysis thresholds mu_i < x < y < mu_1 with the KL quantities the proofs
// consume. plays_scale is L_i(T) = ln T / d(x,y).
struct ThresholdPair {
    double x = 0.0;
    double y = 0.0;
    double delta_prime = 0.0;  // mu_1 - y
    double big_d = 0.0;        // d(y, mu_1)
    double d_xy = 0.0;         // d(x, y)
    double d_x_mu = 0.0;       // d(x, mu_i)

    double plays_scale(double horizon) const {
        return std::log(horizon) / d_xy;
    }
};

// KL-balanced thresholds: d(x,mu_1) = d(mu_i,mu_1)/(1+eps) and
// d(x,y) = d(x,mu_1)/(1+eps), so d(x,y) = d(mu_i,mu_1)/(1+eps)^2.
inline ThresholdPair kl_thresholds(double mu_i, double mu_1, double eps) {
    ThresholdPair t;
    t.x = solve_x_threshold(mu_i, mu_1, eps);
    t.y = solve_y_threshold(t.x, mu_1, eps);
    t.delta_prime = mu_1 - t.y;
    t.big_d = kl_bernoulli(t.y, mu_1);
    t.d_xy = kl_bernoulli(t.x, t.y);
    t.d_x_mu = kl_bernoulli(t.x, mu_i);
    return t;
}

}  // namespace tsb
