#pragma once

// Monte Carlo coarse-grained Bell experiment. For each setting pair
// (x,y), R independent runs each draw N outcome pairs from P(ab|xy),
// count the zeros on each side, and standardize the counts with the
// exact marginals: n~ = (n0 - N m) / sqrt(N m (1 - m)). The binary
// macroscopic outcome is sign(n~) (ties map to +1). In the large-N
// bivariate Gaussian regime E[sign(n~A) sign(n~B)] = (2/pi) asin D_xy,
// so the CHSH functional of the sign correlators converges to
// theoretical_sign_chsh and exceeds 2 exactly when the arcsine
// criterion is violated.
//
// Streams are keyed by (seed, setting pair, run index) with a counter
// generator, and the reduction is accumulated in fixed run order, so
// results are bit-identical for any thread count.

#include <cstdint>
#include <string>

#include "nonlocalbox/box.hpp"
#include "nonlocalbox/errors.hpp"

namespace nlb {

struct MacroConfig {
    std::int64_t pairs_per_run = 10000; // N, outcome pairs drawn per run
    std::int64_t runs = 10000;          // R, runs per setting pair
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

struct MacroResult {
    double d_hat[2][2] = {};       // mean of n~A * n~B per setting pair
    double sign_corr[2][2] = {};   // mean of sign(n~A) * sign(n~B)
    double sign_stderr[2][2] = {}; // standard error of sign_corr
    double mean_n0_alice[2][2] = {}; // per-run mean count of a = 0
    double mean_n0_bob[2][2] = {};   // per-run mean count of b = 0
    double sign_chsh = 0;   // |s00 + s01 + s10 - s11|
    double stderr_sign_chsh = 0;
    MacroConfig config;
};

// Runs the experiment. Throws DeterministicMarginal when any one-party
// marginal is 0 or 1 (the standardization divides by its variance).
MacroResult simulate_macroscopic(const CorrelationBox& box,
                                 const MacroConfig& cfg);

// Large-N limit of sign_chsh: (2/pi) |asin D00 + asin D01 + asin D10
// - asin D11|. Equals 2 exactly on the arcsine-criterion boundary.
double theoretical_sign_chsh(const CorrelationBox& box);

// Writes one row per (setting pair, run) with the standardized
// fluctuations, re-deriving them from the same keyed streams as
// simulate_macroscopic. Guarded to runs <= 1e6 rows per setting.
void write_run_samples_csv(const CorrelationBox& box, const MacroConfig& cfg,
                           const std::string& path);

} // namespace nlb
