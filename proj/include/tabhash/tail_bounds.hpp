#pragma once
// Reference curves for occupancy statistics.
//
// The concentration results only fix bounds up to unstated O/Omega
// constants. Every curve here sets those constants to 1 and is labeled
// "constant-free"; values may exceed 1.

#include <cstdint>
#include <string_view>

namespace tabhash {

/// Probability that a fixed bin is non-empty under fully random hashing: 1 - (1 - 1/n)^m.
long double p0(std::uint64_t n, std::uint64_t m);
/// Expected number of non-empty bins under fully random hashing: n * p0(n, m).
long double mu0(std::uint64_t n, std::uint64_t m);

/// m^(2 - 1/c) / n^2, the additive gap allowed between Pr[y in h(X)] and p0.
/// Doubled when the target bin depends on the hash of a query key.
double hit_probability_gap(std::uint64_t n, std::uint64_t m, unsigned c, bool query_dependent = false);

enum class TailBound { GeneralUpper, GeneralLower, SparseUpper, SparseLower };

std::string_view to_string(TailBound which) noexcept;
TailBound parse_tail_bound(std::string_view name);

/// Constant-free tail bounds:
///   general-upper  Pr[|h(X)| >= mu0 + 2t] <= exp(-t^2 / (2 m^(2-1/c)))
///   general-lower  Pr[|h(X)| <= mu0 - 2t] <= exp(-t^2 / (2 m^(2-1/c))) + m^2 / (n t^2)
///   sparse-upper  Pr[|h(X)| >= mu0 + t]  <= exp(-min(t^2 n / m^(3-1/c), t / m^(1-1/c)))
///   sparse-lower  Pr[|h(X)| <= mu0 - t]  <= the same + m^2 / (n t^2)
/// The lower forms are +infinity at t = 0. The sparse forms require m <= n.
double tail_bound(TailBound which, std::uint64_t n, std::uint64_t m, unsigned c, double t);

}  // namespace tabhash
