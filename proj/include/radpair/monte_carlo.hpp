// Copyright 2026 The radpair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RADPAIR_MONTE_CARLO_HPP
#define RADPAIR_MONTE_CARLO_HPP

#include <cmath>
#include <cstdint>

#include "radpair/evolution.hpp"
#include "radpair/parallel.hpp"

namespace radpair {

/// Counter-based uniform stream: value(trajectory, step) depends only on the
/// seed and the counters, never on the order of evaluation.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    double uniform(std::uint64_t stream, std::uint64_t counter) const {
        std::uint64_t x = mix(seed_ ^ mix(stream + 0x9e3779b97f4a7c15ULL));
        x = mix(x ^ (counter * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

struct MonteCarloResult {
    std::size_t trajectories = 0;
    std::size_t singlet_count = 0;
    std::size_t triplet_count = 0;
    std::size_t unreacted_count = 0;
    double yield_s = 0.0;
    double yield_t = 0.0;
    double stderr_s = 0.0;   // binomial sqrt(Y (1 - Y) / N)
    double stderr_t = 0.0;
};

/// Quantum-jump sampling of the recombination channel along the deterministic
/// trajectory of the trace-preserving equation. In step [t_n, t_n + dt] a pair
/// that is still present recombines to the singlet product with probability
/// 2 kS <Q_S> dt and to the triplet product with probability 2 kT <Q_T> dt,
/// with <Q_S> the step average.
inline MonteCarloResult monte_carlo_yields(const OperatorSet& ops, const RatePair& rates,
                                           std::size_t n_trajectories, std::uint64_t seed,
                                           EvolveOptions options = {}) {
    if (n_trajectories < 1) throw InvalidArgument("n_trajectories must be >= 1");
    options.solver.record_stride = 1;
    options.check_positivity = false;
    const EvolutionRecord rec = evolve(ops, rates, Theory::quantum, options);

    const std::size_t n_steps = rec.times.size() - 1;
    std::vector<double> p_singlet(n_steps), p_any(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double h = rec.times[i + 1] - rec.times[i];
        const double q = 0.5 * (rec.q_s_expect[i] + rec.q_s_expect[i + 1]);
        p_singlet[i] = 2.0 * rates.k_s * q * h;
        p_any[i] = p_singlet[i] + 2.0 * rates.k_t * (1.0 - q) * h;
        if (p_any[i] > 0.1) {
            throw StepSizeError("jump probability per step " + std::to_string(p_any[i]) +
                                " exceeds 0.1; reduce dt");
        }
    }

    const CounterRng rng(seed);
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (n_trajectories + kChunk - 1) / kChunk;
    std::vector<std::size_t> singlet(chunks, 0), triplet(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(n_trajectories, (c + 1) * kChunk);
        for (std::size_t traj = c * kChunk; traj < end; ++traj) {
            for (std::size_t i = 0; i < n_steps; ++i) {
                const double u = rng.uniform(traj, i);
                if (u < p_any[i]) {
                    ++(u < p_singlet[i] ? singlet[c] : triplet[c]);
                    break;
                }
            }
        }
    });

    MonteCarloResult out;
    out.trajectories = n_trajectories;
    for (std::size_t c = 0; c < chunks; ++c) {
        out.singlet_count += singlet[c];
        out.triplet_count += triplet[c];
    }
    out.unreacted_count = n_trajectories - out.singlet_count - out.triplet_count;
    const auto n = static_cast<double>(n_trajectories);
    out.yield_s = static_cast<double>(out.singlet_count) / n;
    out.yield_t = static_cast<double>(out.triplet_count) / n;
    out.stderr_s = std::sqrt(out.yield_s * (1.0 - out.yield_s) / n);
    out.stderr_t = std::sqrt(out.yield_t * (1.0 - out.yield_t) / n);
    return out;
}

inline MonteCarloResult monte_carlo_yields(const SpinSystem& system, const RatePair& rates,
                                           std::size_t n_trajectories, std::uint64_t seed,
                                           EvolveOptions options = {}) {
    return monte_carlo_yields(build_operators(system), rates, n_trajectories, seed,
                              std::move(options));
}

}  // namespace radpair

#endif  // RADPAIR_MONTE_CARLO_HPP
