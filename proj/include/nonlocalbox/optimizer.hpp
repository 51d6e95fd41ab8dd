#pragma once

/*
 * Maximizes observable biasness at a pinned CHSH value.
 *
 * max_equal_bias: largest common marginal bias |1 - 2p| over equally
 * biased boxes whose signed CHSH combination equals chsh_target,
 * subject to one of the admissibility criteria:
 *   - ns: positivity alone. Closed form: the window corner
 *     c = (p, p, p, 2p - 1) gives CHSH 6 - 4p, hence p = (6 - S)/4.
 *   - ic / ml: bisection on p; at each trial p the joint c4 is
 *     eliminated through the CHSH equality and a deterministic
 *     multistart Nelder-Mead search over (c1, c2, c3) inside the
 *     positivity window decides feasibility.
 *
 * max_single_bias_ns: largest bias of the single observable "Alice
 * setting 0" over the full eight-parameter no-signaling family with
 * the CHSH value pinned; the other marginals are free. Closed form
 * bias = (4 - S)/2, witnessed by an explicit corner box.
 */

#include <cstdint>
#include <optional>
#include <string>

#include "nonlocalbox/box.hpp"
#include "nonlocalbox/criteria.hpp"

namespace nlb {

struct OptimizerOptions {
    double chsh_target = 2.8284271247461903; // 2 sqrt(2)
    double p_bisection_tol = 1e-6;
    int inner_starts = 125;   // multistart grid, rounded to a cube
    int inner_iter_cap = 2000;
    std::uint64_t seed = 0;   // recorded for provenance; the default
                              // deterministic solver takes no random draws

    void validate() const;
};

struct QuantumDistance {
    double max_abs = 0;          // entrywise max |P - P_quantum|
    double total_variation = 0;  // mean over settings of TV distance
};

struct BiasMaxResult {
    double p_star = 0;
    double bias_percent = 0;
    double chsh_value = 0;
    std::optional<EqualBiasBox> extremal_box; // present for max_equal_bias
    NsParams extremal_params;                 // always a valid witness
    CriterionReport report;                   // criterion check at the optimum
    QuantumDistance distance_to_quantum;
    std::string method;                       // "analytic" or
                                              // "bisection+multistart"
    double chsh_target = 0;
    std::uint64_t seed = 0;
};

BiasMaxResult max_equal_bias(CriterionKind kind,
                             const OptimizerOptions& opts = {});

BiasMaxResult max_single_bias_ns(double chsh_target);

QuantumDistance distance_to_quantum(const CorrelationBox& box);

} // namespace nlb
