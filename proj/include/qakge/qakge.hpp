// Copyright 2026 The QAKGE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qakge/checkpoint.hpp"
#include "qakge/common.hpp"
#include "qakge/config.hpp"
#include "qakge/context_model.hpp"
#include "qakge/csv.hpp"
#include "qakge/eval.hpp"
#include "qakge/grid_search.hpp"
#include "qakge/kge_model.hpp"
#include "qakge/kge_train.hpp"
#include "qakge/node2vec.hpp"
#include "qakge/planner.hpp"
#include "qakge/profiler.hpp"
#include "qakge/synth_graph.hpp"
#include "qakge/triple_store.hpp"
