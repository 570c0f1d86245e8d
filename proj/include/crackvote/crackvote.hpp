// Copyright 2026 The crackvote Authors
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

#pragma once

#include "crackvote/cleanup.hpp"
#include "crackvote/config.hpp"
#include "crackvote/enhance.hpp"
#include "crackvote/evaluation.hpp"
#include "crackvote/integral.hpp"
#include "crackvote/median.hpp"
#include "crackvote/morphology.hpp"
#include "crackvote/pgm.hpp"
#include "crackvote/pipeline.hpp"
#include "crackvote/raster.hpp"
#include "crackvote/synth.hpp"
#include "crackvote/tensor.hpp"
#include "crackvote/threshold.hpp"
#include "crackvote/voting.hpp"
