#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tsb {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // sum of per-interval |K15 - G7|
    std::int64_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1,1]; Gauss nodes are the odd
// Kronrod entries plus the center.
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kGk15KronrodW[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kGk15GaussW[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <typename F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double f_mid = f(mid);
    double kron = kGk15KronrodW[7] * f_mid;
    double gauss = kGk15GaussW[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGk15Nodes[i];
        const double pair_sum = f(mid - dx) + f(mid + dx);
        kron += kGk15KronrodW[i] * pair_sum;
        if (i % 2 == 1) gauss += kGk15GaussW[i / 2] * pair_sum;
    }
    kron *= half;
    gauss *= half;
    return {kron, std::abs(kron - gauss)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b] to absolute tolerance.
// Splits the worst interval first; stops when the summed error estimate is
// below abs_tol or the evaluation budget is exhausted.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                              std::int64_t max_evaluations = 1'000'000) {
    if (!(a <= b)) throw std::domain_error("integrate_adaptive: need a <= b");
    if (!(abs_tol > 0.0))
        throw std::domain_error("integrate_adaptive: abs_tol must be positive");
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    struct Interval {
        double lo, hi, value, error;
    };
    struct ByError {
        bool operator()(const Interval& p, const Interval& q) const {
            return p.error < q.error;
        }
    };
    std::vector<Interval> heap;
    double total_err = 0.0;
    const auto push = [&](double lo, double hi) {
        auto [v, e] = detail::gk15(f, lo, hi);
        out.evaluations += 15;
        total_err += e;
        heap.push_back({lo, hi, v, e});
        std::push_heap(heap.begin(), heap.end(), ByError{});
    };
    push(a, b);
    for (;;) {
        if (total_err <= abs_tol) {
            out.converged = true;
            break;
        }
        if (out.evaluations + 30 > max_evaluations) break;
        std::pop_heap(heap.begin(), heap.end(), ByError{});
        const Interval worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            heap.push_back(worst);  // interval at double resolution
            break;
        }
        total_err -= worst.error;
        push(worst.lo, mid);
        push(mid, worst.hi);
    }
    double value = 0.0, comp = 0.0, err = 0.0;
    for (const auto& iv : heap) {
        const double y = iv.value - comp;
        const double t = value + y;
        comp = (t - value) - y;
        value = t;
        err += iv.error;
    }
    out.value = value;
    out.error_estimate = err;
    return out;
}

}  // namespace tsb
