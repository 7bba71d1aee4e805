#include "tabhash/tail_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tabhash {

long double p0(std::uint64_t n, std::uint64_t m) {
    if (n == 0) throw std::invalid_argument("p0: n must be >= 1");
    if (m == 0) return 0.0L;
    if (n == 1) return 1.0L;
    const long double log_empty = static_cast<long double>(m) * std::log1p(-1.0L / static_cast<long double>(n));
    return -std::expm1(log_empty);
}

long double mu0(std::uint64_t n, std::uint64_t m) { return static_cast<long double>(n) * p0(n, m); }

double hit_probability_gap(std::uint64_t n, std::uint64_t m, unsigned c, bool query_dependent) {
    if (n == 0 || c == 0) throw std::invalid_argument("hit_probability_gap: n and c must be positive");
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double gap = std::pow(md, 2.0 - 1.0 / c) / (nd * nd);
    return query_dependent ? 2.0 * gap : gap;
}

std::string_view to_string(TailBound which) noexcept {
    switch (which) {
        case TailBound::GeneralUpper: return "general-upper";
        case TailBound::GeneralLower: return "general-lower";
        case TailBound::SparseUpper: return "sparse-upper";
        case TailBound::SparseLower: return "sparse-lower";
    }
    return "unknown";
}

TailBound parse_tail_bound(std::string_view name) {
    for (auto b : {TailBound::GeneralUpper, TailBound::GeneralLower, TailBound::SparseUpper, TailBound::SparseLower})
        if (name == to_string(b)) return b;
    throw std::invalid_argument("unknown bound '" + std::string(name) + "'");
}

double tail_bound(TailBound which, std::uint64_t n, std::uint64_t m, unsigned c, double t) {
    if (n == 0 || m == 0 || c == 0) throw std::invalid_argument("tail_bound: n, m, c must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("tail_bound: t must be >= 0");
    const double md = static_cast<double>(m), nd = static_cast<double>(n), cd = c;
    const double inf = std::numeric_limits<double>::infinity();
    const double collision_term = t == 0.0 ? inf : md * md / (nd * t * t);

    switch (which) {
        case TailBound::GeneralUpper:
        case TailBound::GeneralLower: {
            const double azuma = std::exp(-t * t / (2.0 * std::pow(md, 2.0 - 1.0 / cd)));
            return which == TailBound::GeneralUpper ? azuma : azuma + collision_term;
        }
        case TailBound::SparseUpper:
        case TailBound::SparseLower: {
            if (m > n) throw std::invalid_argument("tail_bound: sparse bounds require m <= n");
            const double quadratic = t * t * nd / std::pow(md, 3.0 - 1.0 / cd);
            const double linear = t / std::pow(md, 1.0 - 1.0 / cd);
            const double tail = std::exp(-std::min(quadratic, linear));
            return which == TailBound::SparseUpper ? tail : tail + collision_term;
        }
    }
    return inf;
}

}  // namespace tabhash
