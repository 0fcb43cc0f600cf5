#pragma once

// One delivery slot of a small three-SBS system, narrated step by step.
// Contents are the letters A..Z in popularity order.

#include <string>

#include "hcache/model.hpp"
#include "hcache/simulator.hpp"

namespace hcache::cli {

/// Requests per SBS, comma separated: 8, 4 and 6 users.
inline constexpr const char* kWalkthroughDemands = "ADEFJBDK,CGHJ,AIZAIL";

struct Walkthrough {
  SystemConfig config;
  HybridPlacement placement;
  DemandMatrix demands;
  SlotOutcome outcome;
  std::string report;
};

/// K=3, N=26, M=5, M1=3, N1=9 under Zipf(1). `demands` holds one group of
/// letters per SBS; the user counts follow from it. Throws ParseError on
/// anything other than three comma-separated groups of A..Z.
Walkthrough walkthrough(const std::string& demands = kWalkthroughDemands);

}  // namespace hcache::cli
