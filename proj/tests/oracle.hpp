#pragma once

// Brute-force lattice oracles, independent of the production search.
//
// grid_max_equal_bias_p scans an absolute lattice over p and
// (c1, c2, c3), eliminates c4 through the CHSH equality, rejects
// points whose c4 leaves the positivity window by more than 1e-12,
// and accepts a point when the criterion lhs exceeds its bound by at
// most `slack`. The slack absorbs the lattice quantization of the
// criterion value; the p resolution itself stays at `step`.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "nonlocalbox/criteria.hpp"
#include "nonlocalbox/parallel.hpp"

namespace oracle {

inline bool grid_feasible_p(nlb::CriterionKind kind, double chsh_target,
                            double p, double step, double slack) {
    const double lo = std::max(0.0, 2.0 * p - 1.0);
    const double hi = p;
    const double k = (chsh_target - 2.0 + 8.0 * p) / 4.0;
    const std::int64_t i_lo = static_cast<std::int64_t>(std::ceil(lo / step - 1e-9));
    const std::int64_t i_hi = static_cast<std::int64_t>(std::floor(hi / step + 1e-9));
    if (i_hi < i_lo)
        return false;
    const std::size_t n1 = static_cast<std::size_t>(i_hi - i_lo + 1);

    std::atomic<bool> found{false};
    nlb::parallel_for(n1, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e && !found.load(std::memory_order_relaxed);
             ++i) {
            double c1 = static_cast<double>(i_lo + static_cast<std::int64_t>(i)) * step;
            for (std::int64_t j = i_lo; j <= i_hi; ++j) {
                double c2 = static_cast<double>(j) * step;
                for (std::int64_t l = i_lo; l <= i_hi; ++l) {
                    double c3 = static_cast<double>(l) * step;
                    double c4 = c1 + c2 + c3 - k;
                    if (c4 < lo - 1e-12 || c4 > hi + 1e-12)
                        continue;
                    double excess;
                    if (kind == nlb::CriterionKind::ic) {
                        double fa, fb;
                        nlb::ic_forms_equal_bias(p, {c1, c2, c3, c4}, fa, fb);
                        excess = std::max(fa, fb) - 1.0;
                    } else {
                        excess = nlb::ml_lhs_equal_bias(p, {c1, c2, c3, c4}) -
                                 std::numbers::pi;
                    }
                    if (excess <= slack) {
                        found.store(true, std::memory_order_relaxed);
                        return;
                    }
                }
                if (found.load(std::memory_order_relaxed))
                    return;
            }
        }
    });
    return found.load();
}

// Largest lattice p (multiples of `step`) admitting a lattice box that
// meets the criterion at the pinned CHSH value; -1 if none.
inline double grid_max_equal_bias_p(nlb::CriterionKind kind,
                                    double chsh_target, double step,
                                    double slack) {
    const double p_top = (6.0 - chsh_target) / 4.0;
    const std::int64_t ip_lo = static_cast<std::int64_t>(std::ceil(0.5 / step - 1e-9));
    const std::int64_t ip_hi = static_cast<std::int64_t>(std::floor(p_top / step + 1e-9));
    double best = -1.0;
    for (std::int64_t ip = ip_lo; ip <= ip_hi; ++ip) {
        double p = static_cast<double>(ip) * step;
        if (grid_feasible_p(kind, chsh_target, p, step, slack))
            best = p;
    }
    return best;
}

} // namespace oracle
