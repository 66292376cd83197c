// Copyright 2026 The otsg Authors
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

#ifndef OTSG_OTSG_HPP
#define OTSG_OTSG_HPP

#include "otsg/diagnostics.hpp"
#include "otsg/errors.hpp"
#include "otsg/experiments.hpp"
#include "otsg/io.hpp"
#include "otsg/linalg.hpp"
#include "otsg/measures.hpp"
#include "otsg/models.hpp"
#include "otsg/objectives.hpp"
#include "otsg/optimize.hpp"
#include "otsg/oracles.hpp"
#include "otsg/ot1d.hpp"
#include "otsg/parallel.hpp"
#include "otsg/rng.hpp"

#endif  // OTSG_OTSG_HPP
