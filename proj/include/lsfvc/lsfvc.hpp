// Copyright 2026  The lsfvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "lsfvc/align.hpp"
#include "lsfvc/commands.hpp"
#include "lsfvc/error.hpp"
#include "lsfvc/eval.hpp"
#include "lsfvc/lpc.hpp"
#include "lsfvc/lsf.hpp"
#include "lsfvc/mlp.hpp"
#include "lsfvc/pipeline.hpp"
#include "lsfvc/random.hpp"
#include "lsfvc/roots.hpp"
#include "lsfvc/signal_io.hpp"
#include "lsfvc/testkit.hpp"
#include "lsfvc/text_io.hpp"
