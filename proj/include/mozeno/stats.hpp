// Paired two-sided Wilcoxon signed-rank test at the 95% level.  Zero
// differences are dropped, tied magnitudes are mid-ranked.  Up to 25
// non-zero pairs the p-value is exact (null distribution over all sign
// assignments, computed by dynamic programming over doubled ranks); beyond
// that a normal approximation with tie correction is used.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mozeno {

enum class WilcoxonDirection : std::int8_t {
    Equivalent = 0,
    FirstLower = -1, // first sample has the lower values
    SecondLower = 1,
};

struct WilcoxonResult {
    double w_plus = 0;
    double w_minus = 0;
    double statistic = 0; // min(w_plus, w_minus)
    double p_value = 1;
    bool significant = false;
    WilcoxonDirection direction = WilcoxonDirection::Equivalent;
};

namespace detail {

/// P(W+ <= w | null) with W+ over doubled mid-ranks, exact.
inline double exact_signed_rank_cdf(const std::vector<long long>& doubled_ranks,
                                    long long doubled_w) {
    long long total = 0;
    for (long long r : doubled_ranks) total += r;
    if (doubled_w < 0) return 0.0;
    if (doubled_w >= total) return 1.0;
    std::vector<double> count(total + 1, 0.0);
    count[0] = 1.0;
    long long reach = 0;
    for (long long r : doubled_ranks) {
        reach += r;
        for (long long s = std::min(reach, total); s >= r; --s)
            count[s] += count[s - r];
    }
    double below = 0.0;
    for (long long s = 0; s <= doubled_w; ++s) below += count[s];
    return below / std::ldexp(1.0, (int)doubled_ranks.size());
}

} // namespace detail

inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                           const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("wilcoxon: samples must be paired");
    if (a.size() < 6)
        throw std::invalid_argument("wilcoxon: need at least 6 pairs");

    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0) diff.push_back(d);
    }
    WilcoxonResult res;
    if (diff.empty()) return res; // all pairs tie: equivalent

    std::size_t n = diff.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(diff[x]) < std::abs(diff[y]);
    });
    std::vector<double> rank(n, 0.0);
    std::vector<long long> doubled_ranks;
    std::vector<std::size_t> tie_sizes;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(diff[order[j]]) == std::abs(diff[order[i]])) ++j;
        double mid = (double)(i + 1 + j) / 2.0; // average of ranks i+1..j
        for (std::size_t t = i; t < j; ++t) rank[order[t]] = mid;
        tie_sizes.push_back(j - i);
        i = j;
    }
    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        (diff[i] > 0 ? w_plus : w_minus) += rank[i];
    res.w_plus = w_plus;
    res.w_minus = w_minus;
    res.statistic = std::min(w_plus, w_minus);

    if (n <= 25) {
        for (std::size_t i = 0; i < n; ++i)
            doubled_ranks.push_back((long long)std::llround(rank[i] * 2.0));
        long long doubled_lo = (long long)std::llround(res.statistic * 2.0);
        res.p_value = std::min(1.0, 2.0 * detail::exact_signed_rank_cdf(doubled_ranks,
                                                                        doubled_lo));
    } else {
        double nn = (double)n;
        double mean = nn * (nn + 1.0) / 4.0;
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        for (std::size_t t : tie_sizes)
            var -= ((double)t * t * t - (double)t) / 48.0;
        double z = (w_plus - mean) / std::sqrt(var);
        res.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
    }
    res.significant = res.p_value < 0.05;
    if (res.significant)
        res.direction = w_plus > w_minus ? WilcoxonDirection::SecondLower
                                         : WilcoxonDirection::FirstLower;
    return res;
}

} // namespace mozeno
