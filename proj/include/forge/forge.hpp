// Copyright 2026 The Forge Authors.
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

#include "forge/benchmark.hpp"
#include "forge/chunker.hpp"
#include "forge/conversation.hpp"
#include "forge/error.hpp"
#include "forge/eval.hpp"
#include "forge/format.hpp"
#include "forge/gateway.hpp"
#include "forge/jsonl.hpp"
#include "forge/labelmap.hpp"
#include "forge/manifest.hpp"
#include "forge/pipeline.hpp"
#include "forge/prompts.hpp"
#include "forge/readers.hpp"
#include "forge/reservoir.hpp"
#include "forge/response_parser.hpp"
#include "forge/rng.hpp"
#include "forge/sampling.hpp"
#include "forge/stats.hpp"
#include "forge/text.hpp"
#include "forge/types.hpp"
#include "forge/version.hpp"
