#pragma once

#include <cstdint>
#include <optional>

namespace hcache {

/// C(n, k) when it fits in 64 bits; 0 when k < 0 or k > n.
std::optional<std::uint64_t> binomial_exact(int n, int k);

/// log C(n, k); -inf when the coefficient is zero.
double log_binomial(int n, int k);

/// C(a, b) / C(n, t) without forming either coefficient when they would
/// overflow. Exact integer arithmetic below 2^63, log-gamma above.
double binomial_ratio(int a, int b, int n, int t);

}  // namespace hcache
