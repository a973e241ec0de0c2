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

#ifndef RADPAIR_RADPAIR_HPP
#define RADPAIR_RADPAIR_HPP

#include "radpair/calibration.hpp"
#include "radpair/config.hpp"
#include "radpair/evolution.hpp"
#include "radpair/master_equation.hpp"
#include "radpair/monte_carlo.hpp"
#include "radpair/operators.hpp"
#include "radpair/presets.hpp"
#include "radpair/scenario.hpp"
#include "radpair/spin_system.hpp"
#include "radpair/superoperator.hpp"
#include "radpair/yields.hpp"

#endif  // RADPAIR_RADPAIR_HPP
