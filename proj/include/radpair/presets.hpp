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

#ifndef RADPAIR_PRESETS_HPP
#define RADPAIR_PRESETS_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "radpair/master_equation.hpp"
#include "radpair/spin_system.hpp"

namespace radpair {

/// Py-DMA isotopologue fitted to the two-nucleus model: one spin-1/2 nucleus
/// per radical with isotropic couplings in mT.
struct PyDmaPreset {
    std::string_view name;
    double a_py_mT;
    double a_dma_mT;
    double k_s_per_us;
    double k_t_per_us;

    SpinSystem system(double field_mT = 0.0) const {
        return two_nucleus_system(a_py_mT, a_dma_mT, field_mT);
    }
    RatePair rates() const { return {k_s_per_us, k_t_per_us}; }
};

inline constexpr std::array<PyDmaPreset, 4> kPyDmaPresets{{
    {"Py-h10-DMA-h11", 1.9, 6.7, 8.5, 4.0},
    {"Py-d10-DMA-h11", 0.4, 5.0, 12.0, 11.4},
    {"Py-d10-DMA-d11", 0.9, 4.2, 7.9, 6.0},
    {"Py-h10-DMA-d11", 1.3, 4.0, 3.7, 1.8},
}};

/// One spin-1/2 nucleus on electron 1 at 0.05 mT with kS = 20, kT = 0.5 us^-1.
struct OneNucleusPreset {
    static constexpr std::string_view name = "one-nucleus";
    static constexpr double field_mT = 0.05;
    static constexpr double k_s_per_us = 20.0;
    static constexpr double k_t_per_us = 0.5;
    static constexpr double a_rad_per_us = 4.0;

    static SpinSystem system(double a = a_rad_per_us) { return one_nucleus_system(a, field_mT); }
    static RatePair rates() { return {k_s_per_us, k_t_per_us}; }
};

struct ResolvedPreset {
    SpinSystem system;
    RatePair rates;
};

inline std::optional<ResolvedPreset> find_preset(std::string_view name) {
    for (const auto& p : kPyDmaPresets) {
        if (p.name == name) return ResolvedPreset{p.system(), p.rates()};
    }
    if (name == OneNucleusPreset::name) {
        return ResolvedPreset{OneNucleusPreset::system(), OneNucleusPreset::rates()};
    }
    return std::nullopt;
}

}  // namespace radpair

#endif  // RADPAIR_PRESETS_HPP
