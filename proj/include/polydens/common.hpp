#ifndef POLYDENS_COMMON_HPP
#define POLYDENS_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polydens {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Thrown when an exhaustive computation would exceed its configured budget.
// Callers that want a bigger run pass a bigger budget; there is no silent
// fallback to an approximate answer anywhere in the library.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr u64 kDefaultEnumBudget = 10'000'000;     // p^d items
inline constexpr u64 kDefaultCountBudget = 200'000'000;   // DP / stream work units
inline constexpr u64 kDefaultBruteBudget = 100'000'000;   // predicate evaluations
inline constexpr i64 kDefaultPrimeCap = 100'000'000;

// p^e for small inputs, with overflow detection.
inline u64 upow_checked(u64 base, unsigned e, const char* what) {
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (base != 0 && r > UINT64_MAX / base)
            throw BudgetError(std::string(what) + ": power overflows 64 bits");
        r *= base;
    }
    return r;
}

inline i64 ipow(i64 base, unsigned e) {
    i64 r = 1;
    while (e--) r *= base;
    return r;
}

}  // namespace polydens

#endif
