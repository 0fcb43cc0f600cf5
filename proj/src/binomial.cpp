#include "hcache/binomial.hpp"

#include <cmath>
#include <limits>

namespace hcache {

std::optional<std::uint64_t> binomial_exact(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (acc > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

double log_binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_ratio(int a, int b, int n, int t) {
  if (b < 0 || a < 0 || b > a) return 0.0;
  auto num = binomial_exact(a, b);
  auto den = binomial_exact(n, t);
  if (num && den) return static_cast<double>(*num) / static_cast<double>(*den);
  return std::exp(log_binomial(a, b) - log_binomial(n, t));
}

}  // namespace hcache
