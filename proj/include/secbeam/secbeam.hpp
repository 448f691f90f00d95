// SPDX-License-Identifier: Apache-2.0
// Part of secbeam. Copyright (c) 2026 the secbeam authors.
#pragma once

// Umbrella header for the whole library. The JSON-dependent layers
// (serialize, harness) additionally require the vendored json.hpp on the
// include path and are therefore not pulled in here.

#include "secbeam/chance.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/config_io.hpp"
#include "secbeam/dense.hpp"
#include "secbeam/evaluator.hpp"
#include "secbeam/hermitian.hpp"
#include "secbeam/power_alloc.hpp"
#include "secbeam/rng.hpp"
#include "secbeam/sdp.hpp"
#include "secbeam/units.hpp"
