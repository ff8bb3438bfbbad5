// Copyright 2026 The lisa-match Authors
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

// Umbrella header.
#pragma once

#include "lisa/errors.hpp"
#include "lisa/workspace.hpp"
#include "lisa/core.hpp"
#include "lisa/rng.hpp"
#include "lisa/spectral.hpp"
#include "lisa/assign.hpp"
#include "lisa/matchers.hpp"
#include "lisa/delaunay.hpp"
#include "lisa/graphgen.hpp"
#include "lisa/graphio.hpp"
#include "lisa/bench.hpp"
