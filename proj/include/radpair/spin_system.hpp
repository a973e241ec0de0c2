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

#ifndef RADPAIR_SPIN_SYSTEM_HPP
#define RADPAIR_SPIN_SYSTEM_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "radpair/error.hpp"

namespace radpair {

// Internal units: time in microseconds, every energy or coupling as an
// angular frequency in rad/us, magnetic fields in millitesla.

/// Electron gyromagnetic conversion g_e * mu_B / hbar in rad us^-1 mT^-1.
/// The only place the mT <-> rad/us correspondence is defined.
inline constexpr double kGammaElectron = 176.0859;

inline double field_to_angular(double field_mT) { return kGammaElectron * field_mT; }
inline double mT_to_rad_per_us(double coupling_mT) { return kGammaElectron * coupling_mT; }
inline double rad_per_us_to_mT(double coupling) { return coupling / kGammaElectron; }

/// Default cap on the Hilbert-space dimension d.
inline constexpr std::size_t kDefaultMaxDimension = 256;

enum class Electron { first = 1, second = 2 };

/// Hyperfine tensor in rad/us: H_hf contribution s_i . A . I_j.
class HyperfineCoupling {
public:
    HyperfineCoupling() : tensor_(Eigen::Matrix3d::Zero()) {}

    explicit HyperfineCoupling(const Eigen::Matrix3d& tensor) : tensor_(tensor) {
        if (!tensor_.allFinite()) {
            throw InvalidArgument("hyperfine tensor has non-finite entries");
        }
    }

    static HyperfineCoupling isotropic(double a_rad_per_us) {
        return HyperfineCoupling(a_rad_per_us * Eigen::Matrix3d::Identity());
    }

    static HyperfineCoupling isotropic_mT(double a_mT) {
        return isotropic(mT_to_rad_per_us(a_mT));
    }

    const Eigen::Matrix3d& tensor() const noexcept { return tensor_; }

    bool is_isotropic() const {
        const double a = tensor_(0, 0);
        Eigen::Matrix3d off = tensor_ - a * Eigen::Matrix3d::Identity();
        return off.cwiseAbs().maxCoeff() == 0.0;
    }

    /// Isotropic scalar A; only meaningful when is_isotropic().
    double isotropic_value() const { return tensor_(0, 0); }

    bool operator==(const HyperfineCoupling&) const = default;

private:
    Eigen::Matrix3d tensor_;
};

/// Nuclear spin I (a positive multiple of 1/2) coupled to one electron.
struct NucleusSpec {
    double spin = 0.5;
    Electron electron = Electron::first;
    HyperfineCoupling hyperfine;

    /// 2I + 1.
    std::size_t multiplicity() const { return static_cast<std::size_t>(std::lround(2.0 * spin)) + 1; }

    void validate() const {
        const double twice = 2.0 * spin;
        if (!std::isfinite(spin) || spin <= 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
            throw InvalidArgument("nuclear spin must be a positive multiple of 1/2, got " +
                                  std::to_string(spin));
        }
        if (electron != Electron::first && electron != Electron::second) {
            throw InvalidArgument("nucleus must couple to electron 1 or 2");
        }
    }

    bool operator==(const NucleusSpec&) const = default;
};

/// Two unpaired electrons plus n nuclei in a static field B along z.
struct SpinSystem {
    std::vector<NucleusSpec> nuclei;
    double field_mT = 0.0;

    void validate() const {
        if (!std::isfinite(field_mT) || field_mT < 0.0) {
            throw InvalidArgument("field_mT must be finite and >= 0");
        }
        for (const auto& n : nuclei) n.validate();
    }

    /// d = 4 * prod_j (2 I_j + 1). Saturates at SIZE_MAX instead of wrapping.
    std::size_t dimension() const {
        std::size_t d = 4;
        for (const auto& n : nuclei) {
            const std::size_t m = n.multiplicity();
            if (d > std::numeric_limits<std::size_t>::max() / m) {
                return std::numeric_limits<std::size_t>::max();
            }
            d *= m;
        }
        return d;
    }

    /// Angular Zeeman frequency omega of the electrons, rad/us.
    double omega() const { return field_to_angular(field_mT); }

    bool operator==(const SpinSystem&) const = default;
};

/// One spin-1/2 nucleus isotropically coupled to electron 1.
inline SpinSystem one_nucleus_system(double a_rad_per_us, double field_mT) {
    SpinSystem s;
    s.field_mT = field_mT;
    s.nuclei.push_back({0.5, Electron::first, HyperfineCoupling::isotropic(a_rad_per_us)});
    return s;
}

/// Two spin-1/2 nuclei: one on each radical (Py on electron 1, DMA on electron 2).
inline SpinSystem two_nucleus_system(double a1_mT, double a2_mT, double field_mT) {
    SpinSystem s;
    s.field_mT = field_mT;
    s.nuclei.push_back({0.5, Electron::first, HyperfineCoupling::isotropic_mT(a1_mT)});
    s.nuclei.push_back({0.5, Electron::second, HyperfineCoupling::isotropic_mT(a2_mT)});
    return s;
}

}  // namespace radpair

#endif  // RADPAIR_SPIN_SYSTEM_HPP
