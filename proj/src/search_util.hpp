#pragma once

#include <algorithm>
#include <cmath>

namespace hcache::detail {

// Loads closer than this are ties; the earlier candidate in enumeration
// order wins.
inline bool strictly_better(double candidate, double incumbent) {
  return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

}  // namespace hcache::detail
