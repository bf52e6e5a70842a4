#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsbandit/rng.hpp"

namespace tsb {

// One arm's reward distribution: Bernoulli(mean) or a finite discrete
// distribution supported on [0,1].
struct ArmSpec {
    enum class Kind { bernoulli, discrete };

    Kind kind = Kind::bernoulli;
    double bernoulli_mean = 0.0;
    std::vector<double> support;      // discrete only
    std::vector<double> probability;  // discrete only, sums to 1

    static ArmSpec bernoulli(double mean) {
        if (!(mean >= 0.0 && mean <= 1.0))
            throw std::domain_error("ArmSpec: Bernoulli mean must lie in [0,1]");
        ArmSpec a;
        a.kind = Kind::bernoulli;
        a.bernoulli_mean = mean;
        return a;
    }

    static ArmSpec discrete(std::vector<double> values,
                            std::vector<double> probs) {
        if (values.empty() || values.size() != probs.size())
            throw std::domain_error(
                "ArmSpec: discrete support and probabilities must be "
                "non-empty and equal-length");
        double total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] >= 0.0 && values[i] <= 1.0))
                throw std::domain_error(
                    "ArmSpec: discrete support must lie in [0,1]");
            if (!(probs[i] >= 0.0))
                throw std::domain_error(
                    "ArmSpec: discrete probabilities must be non-negative");
            total += probs[i];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::domain_error(
                "ArmSpec: discrete probabilities must sum to 1");
        ArmSpec a;
        a.kind = Kind::discrete;
        a.support = std::move(values);
        a.probability = std::move(probs);
        return a;
    }

    double mean() const {
        if (kind == Kind::bernoulli) return bernoulli_mean;
        double m = 0.0;
        for (std::size_t i = 0; i < support.size(); ++i)
            m += support[i] * probability[i];
        return m;
    }

    double sample(RandomStream& stream) const {
        if (kind == Kind::bernoulli)
            return static_cast<double>(stream.bernoulli(bernoulli_mean));
        const double u = stream.uniform();
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < support.size(); ++i) {
            cum += probability[i];
            if (u < cum) return support[i];
        }
        return support.back();
    }
};

// A bandit instance: arm distributions plus the derived quantities every
// bound and simulation consumes. gaps[i] = means[optimal_index] - means[i].
struct BanditInstance {
    std::vector<ArmSpec> arms;
    std::vector<double> means;
    std::vector<double> gaps;
    std::size_t optimal_index = 0;
    bool unique_optimal = true;

    std::size_t num_arms() const { return arms.size(); }
};

// Ties break toward the lowest index; unique_optimal records whether the
// maximum mean is attained exactly once.
inline BanditInstance make_instance(std::vector<ArmSpec> specs) {
    if (specs.empty())
        throw std::domain_error("make_instance: need at least one arm");
    BanditInstance inst;
    inst.arms = std::move(specs);
    inst.means.reserve(inst.arms.size());
    for (const auto& arm : inst.arms) inst.means.push_back(arm.mean());
    inst.optimal_index = 0;
    for (std::size_t i = 1; i < inst.means.size(); ++i)
        if (inst.means[i] > inst.means[inst.optimal_index])
            inst.optimal_index = i;
    std::size_t top_count = 0;
    for (double m : inst.means)
        if (m == inst.means[inst.optimal_index]) ++top_count;
    inst.unique_optimal = top_count == 1;
    inst.gaps.reserve(inst.means.size());
    for (double m : inst.means)
        inst.gaps.push_back(inst.means[inst.optimal_index] - m);
    return inst;
}

inline double pull(const BanditInstance& inst, std::size_t arm,
                   RandomStream& stream) {
    if (arm >= inst.arms.size())
        throw std::out_of_range("pull: arm index out of range");
    return inst.arms[arm].sample(stream);
}

}  // namespace tsb
