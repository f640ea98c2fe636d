// Copyright 2026 The spikegrad Authors
// SPDX-License-Identifier: Apache-2.0

#include "spikegrad/io.hpp"

#include <charconv>
#include <cmath>

namespace spikegrad {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace spikegrad
