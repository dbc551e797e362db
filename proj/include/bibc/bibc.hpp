// SPDX-License-Identifier: Apache-2.0
//
// bibc - cell-free bistatic backscatter simulation and optimization library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BIBC_BIBC_HPP
#define BIBC_BIBC_HPP

#include "config.hpp"
#include "rng.hpp"
#include "geometry.hpp"
#include "channel.hpp"
#include "pilots.hpp"
#include "system_model.hpp"
#include "numerics/special.hpp"
#include "numerics/linalg.hpp"
#include "numerics/concave.hpp"
#include "numerics/lp.hpp"
#include "numerics/finite_diff.hpp"
#include "optimizer/beamforming.hpp"
#include "optimizer/combiner.hpp"
#include "optimizer/reflection.hpp"
#include "optimizer/baseline.hpp"
#include "optimizer/ao.hpp"

#endif
