// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace spikegrad {

/// Shortest decimal form that parses back to the exact same double.
/// All CSV/JSON output goes through this so reruns are byte-comparable.
std::string format_double(double v);

}  // namespace spikegrad
