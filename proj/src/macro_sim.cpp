#include "nonlocalbox/macro_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>
#include <vector>

#include "nonlocalbox/criteria.hpp"
#include "nonlocalbox/parallel.hpp"
#include "nonlocalbox/rng.hpp"

namespace nlb {

namespace {

constexpr double kMarginalFloor = 1e-12; // below this variance is treated as 0
constexpr std::int64_t kChunkRuns = 4096;
constexpr std::int64_t kSampleCsvRunCap = 1000000;

// Everything needed to sample one setting pair's runs independently of
// any shared state, so chunks can execute on any thread.
struct SettingSampler {
    double q1, q2, q3;   // cumulative cell probabilities of the row
    double mean_a, mean_b;
    double sd_a, sd_b;   // sqrt(N m (1 - m))
    std::int64_t pairs;
    std::uint64_t seed;
    std::uint64_t setting;

    struct Run {
        double fluct_a, fluct_b;
        std::int64_t n0_a, n0_b;
    };

    Run sample(std::int64_t run_index) const {
        CounterRng rng(seed, setting, static_cast<std::uint64_t>(run_index));
        std::int64_t n0a = 0, n0b = 0;
        for (std::int64_t i = 0; i < pairs; ++i) {
            double u = rng.next_double();
            if (u < q2) { // a = 0
                ++n0a;
                if (u < q1)
                    ++n0b;
            } else if (u < q3) { // a = 1, b = 0
                ++n0b;
            }
        }
        Run r;
        r.n0_a = n0a;
        r.n0_b = n0b;
        r.fluct_a = (static_cast<double>(n0a) - mean_a) / sd_a;
        r.fluct_b = (static_cast<double>(n0b) - mean_b) / sd_b;
        return r;
    }
};

SettingSampler make_sampler(const CorrelationBox& box, int x, int y,
                            const MacroConfig& cfg) {
    double ma = marginal(box, Party::alice, x).p0;
    double mb = marginal(box, Party::bob, y).p0;
    for (auto [m, who, idx] : {std::tuple{ma, "alice x=", x},
                               std::tuple{mb, "bob y=", y}}) {
        if (m < kMarginalFloor || m > 1.0 - kMarginalFloor)
            throw DeterministicMarginal(
                std::string("marginal for ") + who + std::to_string(idx) +
                " is " + std::to_string(m) +
                "; standardized fluctuation undefined");
    }
    auto row = box.row(x, y);
    double n = static_cast<double>(cfg.pairs_per_run);
    SettingSampler s;
    s.q1 = row[0];
    s.q2 = row[0] + row[1];
    s.q3 = row[0] + row[1] + row[2];
    s.mean_a = n * ma;
    s.mean_b = n * mb;
    s.sd_a = std::sqrt(n * ma * (1.0 - ma));
    s.sd_b = std::sqrt(n * mb * (1.0 - mb));
    s.pairs = cfg.pairs_per_run;
    s.seed = cfg.seed;
    s.setting = static_cast<std::uint64_t>(2 * x + y);
    return s;
}

double sign_of(double v) { return v >= 0 ? 1.0 : -1.0; } // sign(0) = +1

struct ChunkSums {
    double prod = 0, sign = 0;
    std::int64_t n0_a = 0, n0_b = 0;
};

} // namespace

void MacroConfig::validate() const {
    if (pairs_per_run < 100)
        throw ConfigError("pairs_per_run must be at least 100, got " +
                          std::to_string(pairs_per_run));
    if (runs < 1000)
        throw ConfigError("runs must be at least 1000, got " +
                          std::to_string(runs));
    if (static_cast<double>(pairs_per_run) * static_cast<double>(runs) > 1e10)
        throw ConfigError("pairs_per_run * runs exceeds the 1e10 guard");
}

MacroResult simulate_macroscopic(const CorrelationBox& box,
                                 const MacroConfig& cfg) {
    cfg.validate();
    box.validate();

    MacroResult res;
    res.config = cfg;
    const std::int64_t runs = cfg.runs;
    const std::int64_t num_chunks = (runs + kChunkRuns - 1) / kChunkRuns;

    double se2_sum = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            SettingSampler sampler = make_sampler(box, x, y, cfg);

            // Per-chunk partial sums, accumulated in run order inside
            // each chunk and reduced in chunk order afterwards, so the
            // result is independent of the thread count.
            std::vector<ChunkSums> partial(
                static_cast<std::size_t>(num_chunks));
            parallel_for(static_cast<std::size_t>(num_chunks),
                         [&](std::size_t cb, std::size_t ce) {
                for (std::size_t ci = cb; ci < ce; ++ci) {
                    ChunkSums sums;
                    std::int64_t r0 = static_cast<std::int64_t>(ci) * kChunkRuns;
                    std::int64_t r1 = std::min(runs, r0 + kChunkRuns);
                    for (std::int64_t r = r0; r < r1; ++r) {
                        auto run = sampler.sample(r);
                        sums.prod += run.fluct_a * run.fluct_b;
                        sums.sign +=
                            sign_of(run.fluct_a) * sign_of(run.fluct_b);
                        sums.n0_a += run.n0_a;
                        sums.n0_b += run.n0_b;
                    }
                    partial[ci] = sums;
                }
            });

            ChunkSums total;
            for (const ChunkSums& c : partial) {
                total.prod += c.prod;
                total.sign += c.sign;
                total.n0_a += c.n0_a;
                total.n0_b += c.n0_b;
            }
            double rd = static_cast<double>(runs);
            double s = total.sign / rd;
            double se2 = (1.0 - s * s) / (rd - 1.0);
            res.d_hat[x][y] = total.prod / rd;
            res.sign_corr[x][y] = s;
            res.sign_stderr[x][y] = std::sqrt(std::max(0.0, se2));
            res.mean_n0_alice[x][y] = static_cast<double>(total.n0_a) / rd;
            res.mean_n0_bob[x][y] = static_cast<double>(total.n0_b) / rd;
            se2_sum += std::max(0.0, se2);
        }

    res.sign_chsh = std::abs(res.sign_corr[0][0] + res.sign_corr[0][1] +
                             res.sign_corr[1][0] - res.sign_corr[1][1]);
    res.stderr_sign_chsh = std::sqrt(se2_sum);
    return res;
}

double theoretical_sign_chsh(const CorrelationBox& box) {
    MlTerms t = ml_terms(box);
    double sum = std::asin(t.d[0]) + std::asin(t.d[1]) + std::asin(t.d[2]) -
                 std::asin(t.d[3]);
    return 2.0 / std::numbers::pi * std::abs(sum);
}

void write_run_samples_csv(const CorrelationBox& box, const MacroConfig& cfg,
                           const std::string& path) {
    cfg.validate();
    box.validate();
    if (cfg.runs > kSampleCsvRunCap)
        throw ConfigError("sample emission is capped at 1e6 runs, got " +
                          std::to_string(cfg.runs));

    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw IoError("cannot open " + path + " for writing");
    std::fputs("x,y,run,fluct_alice,fluct_bob\n", f);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            SettingSampler sampler = make_sampler(box, x, y, cfg);
            for (std::int64_t r = 0; r < cfg.runs; ++r) {
                auto run = sampler.sample(r);
                std::fprintf(f, "%d,%d,%lld,%.10g,%.10g\n", x, y,
                             static_cast<long long>(r), run.fluct_a,
                             run.fluct_b);
            }
        }
    if (std::fclose(f) != 0)
        throw IoError("error closing " + path);
}

} // namespace nlb
