// Copyright 2026 The sslmotion Authors
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

#ifndef SSLMOTION_SSLMOTION_HPP_
#define SSLMOTION_SSLMOTION_HPP_

#include "sslmotion/geometry.hpp"
#include "sslmotion/world.hpp"
#include "sslmotion/trajectory.hpp"
#include "sslmotion/planner.hpp"
#include "sslmotion/estimator.hpp"
#include "sslmotion/navigation.hpp"
#include "sslmotion/refparser.hpp"
#include "sslmotion/pipeline.hpp"
#include "sslmotion/harness/scenario.hpp"
#include "sslmotion/harness/sim.hpp"
#include "sslmotion/harness/env.hpp"
#include "sslmotion/harness/bench.hpp"

#endif  // SSLMOTION_SSLMOTION_HPP_
