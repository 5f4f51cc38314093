// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace bertini {

/// Enumeration limits. Defaults can be overridden through the environment:
///
///   BERTINI_FIELD_CAP   largest admissible field order q        (default 2^20)
///   BERTINI_CENSUS_CAP  largest census stream length q^rank     (default 2^28)
///   BERTINI_POINT_CAP   largest point-enumeration box (q^r)^n+1 (default 2^22)
struct Caps {
  std::uint64_t field_order = std::uint64_t{1} << 20;
  std::uint64_t census = std::uint64_t{1} << 28;
  std::uint64_t points = std::uint64_t{1} << 22;

  /// Defaults with environment overrides applied. Read once per process.
  static const Caps& current();
};

}  // namespace bertini
