#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bgmap {

/// Advance a sorted size-k index combination over {0..n-1} to its
/// lexicographic successor. Returns false when comb was the last one.
inline bool next_combination(std::vector<int>& comb, std::size_t n) {
    const std::size_t k = comb.size();
    std::size_t pos = k;
    while (pos > 0) {
        --pos;
        if (comb[pos] < static_cast<int>(n - k + pos)) {
            ++comb[pos];
            for (std::size_t q = pos + 1; q < k; ++q) comb[q] = comb[q - 1] + 1;
            return true;
        }
    }
    return false;
}

inline std::vector<int> first_combination(std::size_t k) {
    std::vector<int> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = static_cast<int>(i);
    return comb;
}

/// Number of supports of size min_size..k over n columns, saturating at cap+1.
inline std::uint64_t count_supports(std::size_t n, std::size_t k, std::uint64_t cap,
                                    std::size_t min_size = 1) {
    std::uint64_t total = min_size == 0 ? 1 : 0;
    double binom = 1.0;
    for (std::size_t kk = 1; kk <= k && kk <= n; ++kk) {
        binom = binom * static_cast<double>(n - kk + 1) / static_cast<double>(kk);
        if (kk < min_size) continue;
        if (binom > static_cast<double>(cap) ||
            total + static_cast<std::uint64_t>(binom) > cap) {
            return cap + 1;
        }
        total += static_cast<std::uint64_t>(binom + 0.5);
    }
    return total;
}

} // namespace bgmap
