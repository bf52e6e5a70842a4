#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace tsbtest {

// Two-sided Kolmogorov-Smirnov statistic of samples against a CDF.
// Asymptotic critical value at significance 1e-3 is 1.95/sqrt(n).
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double lo = f - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - f;
        d = std::max(d, std::max(lo, hi));
    }
    return d;
}

inline constexpr double kKsCritical1e3 = 1.95;  // times 1/sqrt(n)

}  // namespace tsbtest
