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

// Frozen reference values written by tests/oracle/yield_oracle.py.
// Do not edit by hand.

#ifndef RADPAIR_TESTS_ORACLE_FIXTURES_HPP
#define RADPAIR_TESTS_ORACLE_FIXTURES_HPP

#include <array>

namespace radpair::fixtures {

// Singlet yield of each isotopologue preset (catalog order) at 0 and 10 mT.
inline constexpr std::array<double, 4> k_quantum_ys_b0{{
    5.962729542840e-01,
    4.531729598566e-01,
    4.808079914242e-01,
    5.880273832111e-01}};
inline constexpr std::array<double, 4> k_quantum_ys_b10{{
    6.276498637253e-01,
    4.802859469377e-01,
    5.421430702746e-01,
    6.482225888583e-01}};
inline constexpr std::array<double, 4> k_phenom_ys_b0{{
    5.986718996652e-01,
    4.669013523605e-01,
    4.975815968080e-01,
    5.915817240993e-01}};
inline constexpr std::array<double, 4> k_phenom_ys_b10{{
    6.336534320848e-01,
    4.889111519430e-01,
    5.482983744069e-01,
    6.516290991981e-01}};

// Triplet yield over A = 1, 2, ..., 30 rad/us for the one-nucleus pair.
inline constexpr std::array<double, 30> k_hfc_quantum_yt{{
    3.822505318378e-06,
    1.531526513244e-05,
    3.455447176826e-05,
    6.166863985087e-05,
    9.684085918933e-05,
    1.403118374972e-04,
    1.923835278012e-04,
    2.534229087547e-04,
    3.238650746755e-04,
    4.042141174628e-04,
    4.950393603787e-04,
    5.969636545845e-04,
    7.106404303173e-04,
    8.367178198542e-04,
    9.757914419541e-04,
    1.128351130824e-03,
    1.294729281765e-03,
    1.475058548815e-03,
    1.669244572680e-03,
    1.876956277096e-03,
    2.097633189246e-03,
    2.330506967606e-03,
    2.574633113668e-03,
    2.828928590716e-03,
    3.092211488712e-03,
    3.363239652286e-03,
    3.640746080766e-03,
    3.923469750795e-03,
    4.210181215931e-03,
    4.499702872677e-03}};
inline constexpr std::array<double, 30> k_hfc_phenom_yt{{
    4.060609717308e-04,
    1.580060797716e-03,
    3.397783123587e-03,
    5.678086608120e-03,
    8.215808520207e-03,
    1.081693607521e-02,
    1.332658141523e-02,
    1.564227522715e-02,
    1.771190892431e-02,
    1.952207060613e-02,
    2.108395576726e-02,
    2.242150578508e-02,
    2.356329590876e-02,
    2.453780320447e-02,
    2.537106289664e-02,
    2.608577874941e-02,
    2.670121919797e-02,
    2.723348570418e-02,
    2.769592175040e-02,
    2.809954387505e-02,
    2.845344043602e-02,
    2.876511791964e-02,
    2.904079148463e-02,
    2.928562396588e-02,
    2.950392030251e-02,
    2.969928477813e-02,
    2.987474787085e-02,
    3.003286856173e-02,
    3.017581695326e-02,
    3.030544113858e-02}};

// One-nucleus pair at A = 10 rad/us: {Y_S, Y_T}.
inline constexpr std::array<double, 2> k_a10_quantum{{
    9.995957858825e-01,
    4.042141174628e-04}};
inline constexpr std::array<double, 2> k_a10_phenom{{
    9.804779293939e-01,
    1.952207060613e-02}};

}  // namespace radpair::fixtures

#endif  // RADPAIR_TESTS_ORACLE_FIXTURES_HPP
