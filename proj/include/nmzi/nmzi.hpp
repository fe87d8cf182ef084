// Copyright 2026 The nmzi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// Umbrella header: the whole simulator in one include.
#pragma once

#include "nmzi/paths.hpp"
#include "nmzi/statevec.hpp"
#include "nmzi/probes.hpp"
#include "nmzi/interferometer.hpp"
#include "nmzi/oracle.hpp"
#include "nmzi/analysis.hpp"
#include "nmzi/pointer.hpp"
#include "nmzi/montecarlo.hpp"
#include "nmzi/config.hpp"
#include "nmzi/commands.hpp"
#include "nmzi/acceptance.hpp"
