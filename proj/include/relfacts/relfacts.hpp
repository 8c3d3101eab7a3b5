// Copyright 2026 The relfacts Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Umbrella header.
 */
#pragma once

#include "relfacts/error.hpp"
#include "relfacts/linalg.hpp"
#include "relfacts/registry.hpp"
#include "relfacts/tensor.hpp"
#include "relfacts/random.hpp"
#include "relfacts/composite.hpp"
#include "relfacts/facts.hpp"
#include "relfacts/stability.hpp"
#include "relfacts/format.hpp"
#include "relfacts/decoherence.hpp"
#include "relfacts/plan.hpp"
#include "relfacts/report.hpp"
#include "relfacts/scenarios.hpp"
#include "relfacts/scenario_file.hpp"
