// SPDX-License-Identifier: Apache-2.0
#include "bertini/caps.hpp"

#include <cstdlib>
#include <string>

namespace bertini {
namespace {

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    return std::stoull(raw);
  } catch (...) {
    return fallback;
  }
}

}  // namespace

const Caps& Caps::current() {
  static const Caps caps = [] {
    Caps c;
    c.field_order = env_or("BERTINI_FIELD_CAP", c.field_order);
    c.census = env_or("BERTINI_CENSUS_CAP", c.census);
    c.points = env_or("BERTINI_POINT_CAP", c.points);
    return c;
  }();
  return caps;
}

}  // namespace bertini
