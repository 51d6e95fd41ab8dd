// Acceptance harness: ten end-to-end checks, one PASS/FAIL line each.
// Exit code equals the number of failed checks.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>

#include "nonlocalbox/box.hpp"
#include "nonlocalbox/criteria.hpp"
#include "nonlocalbox/macro_sim.hpp"
#include "nonlocalbox/optimizer.hpp"
#include "nonlocalbox/rng.hpp"
#include "oracle.hpp"

using namespace nlb;

namespace {

int g_failures = 0;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report(int index, const char* name, bool pass, double seconds,
            const std::string& detail) {
    std::printf("[%2d] %s  %-34s (%6.2f s)  %s\n", index,
                pass ? "PASS" : "FAIL", name, seconds, detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

EqualBiasBox random_equal_bias(CounterRng& rng) {
    EqualBiasBox b;
    b.p = rng.uniform(0.1, 0.9);
    const double lo = std::max(0.0, 2.0 * b.p - 1.0);
    for (double& ci : b.c)
        ci = rng.uniform(lo, b.p);
    return b;
}

NsParams random_ns_params(CounterRng& rng) {
    NsParams p;
    p.m1 = rng.uniform(0.05, 0.95);
    p.m2 = rng.uniform(0.05, 0.95);
    p.n1 = rng.uniform(0.05, 0.95);
    p.n2 = rng.uniform(0.05, 0.95);
    const double ms[2] = {p.m1, p.m2};
    const double ns[2] = {p.n1, p.n2};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double lo = std::max(0.0, ms[x] + ns[y] - 1.0);
            const double hi = std::min(ms[x], ns[y]);
            p.c[static_cast<std::size_t>(2 * x + y)] = rng.uniform(lo, hi);
        }
    return p;
}

} // namespace

int main() {
    const double sqrt2 = std::sqrt(2.0);
    const double tsirelson = 2.0 * sqrt2;
    std::printf("acceptance checks (ten criteria)\n");

    // Optimizations reused across several checks.
    BiasMaxResult ns_res, ic_res, ml_res;
    double t_ns = 0.0, t_ic = 0.0, t_ml = 0.0;
    {
        Timer t;
        ns_res = max_equal_bias(CriterionKind::ns);
        t_ns = t.seconds();
    }
    {
        Timer t;
        ic_res = max_equal_bias(CriterionKind::ic);
        t_ic = t.seconds();
    }
    {
        Timer t;
        ml_res = max_equal_bias(CriterionKind::ml);
        t_ml = t.seconds();
    }

    // 1. No-signaling optimum is the closed form (3 - sqrt 2) / 2.
    {
        const double expect = (3.0 - sqrt2) / 2.0;
        const double diff = std::abs(ns_res.p_star - expect);
        report(1, "ns maximum equal bias", diff <= 1e-9 && t_ns < 1.0, t_ns,
               fmt("p_star=%.12f  |p-(3-sqrt2)/2|=%.1e  bias=%.4f%%",
                   ns_res.p_star, diff, ns_res.bias_percent));
    }

    // 2. Information-causality optimum lands at 0.646469 within 5e-4.
    {
        const double diff = std::abs(ic_res.p_star - 0.646469);
        report(2, "ic maximum equal bias", diff <= 5e-4 && t_ic < 30.0, t_ic,
               fmt("p_star=%.6f  |p-0.646469|=%.1e", ic_res.p_star, diff));
    }

    // 3. Macroscopic-locality optimum lands at 0.500226 within 5e-4.
    {
        const double diff = std::abs(ml_res.p_star - 0.500226);
        report(3, "ml maximum equal bias", diff <= 5e-4 && t_ml < 60.0, t_ml,
               fmt("p_star=%.6f  |p-0.500226|=%.1e  bias=%.4f%%",
                   ml_res.p_star, diff, ml_res.bias_percent));
    }

    // 4. The ml extremal box is the quantum box to three decimals.
    {
        Timer t;
        const double d = ml_res.distance_to_quantum.max_abs;
        report(4, "ml extremal matches quantum box", d < 1e-3, t.seconds(),
               fmt("max_abs distance=%.2e", d));
    }

    // 5. Reference boxes saturate or violate the boundaries exactly.
    {
        Timer t;
        const CorrelationBox q = quantum_tsirelson_box();
        const CorrelationBox pr = pr_box();
        const double chsh_err = std::abs(chsh_value(q) - tsirelson);
        const CriterionReport qic = ic_check(q);
        const CriterionReport qml = ml_check(q);
        double ic_err = 0.0;
        for (double v : qic.lhs)
            ic_err = std::max(ic_err, std::abs(v - 1.0));
        const double ml_err = std::abs(qml.lhs[0] - std::numbers::pi);
        const CriterionReport pic = ic_check(pr);
        const CriterionReport pml = ml_check(pr);
        double pr_ic_err = 0.0;
        for (double v : pic.lhs)
            pr_ic_err = std::max(pr_ic_err, std::abs(v - 2.0));
        const double pr_ml_err =
            std::abs(pml.lhs[0] - 2.0 * std::numbers::pi);
        const bool pass = chsh_err <= 1e-12 && ic_err <= 1e-12 &&
                          ml_err <= 1e-9 && !pic.satisfied &&
                          !pml.satisfied && pr_ic_err <= 1e-12 &&
                          pr_ml_err <= 1e-12;
        report(5, "boundary saturation", pass, t.seconds(),
               fmt("chsh_err=%.1e ic_err=%.1e ml_err=%.1e pr_ic_err=%.1e "
                   "pr_ml_err=%.1e",
                   chsh_err, ic_err, ml_err, pr_ic_err, pr_ml_err));
    }

    // 6. The published six-decimal extremal box is feasible as printed.
    {
        Timer t;
        const EqualBiasBox printed{0.646469,
                                   {0.5, 0.646469, 0.646469, 0.292893}};
        bool valid = true;
        std::string why;
        double chsh_err = 0.0, form_err = 0.0;
        try {
            const CorrelationBox box = box_from_equal_bias(printed, 1e-4);
            const CriterionReport ns = check_no_signaling(box);
            valid = ns.satisfied;
            chsh_err = std::abs(chsh_value(box) - tsirelson);
            double fa = 0.0, fb = 0.0;
            ic_forms_equal_bias(printed.p, printed.c, fa, fb);
            form_err = std::abs(std::max(fa, fb) - 1.0);
        } catch (const Error& e) {
            valid = false;
            why = e.what();
        }
        const bool pass = valid && chsh_err <= 2e-3 && form_err <= 2e-3;
        report(6, "printed extremal box feasibility", pass, t.seconds(),
               why.empty() ? fmt("chsh_err=%.2e  |max_form-1|=%.2e", chsh_err,
                                 form_err)
                           : why);
    }

    // 7. Single-observable bias at the quantum bound against the quoted 60%.
    {
        Timer t;
        const BiasMaxResult r = max_single_bias_ns(tsirelson);
        const double diff = std::abs(r.bias_percent - 60.0);
        report(7, "single-observable bias is 60%", diff <= 0.1, t.seconds(),
               fmt("bias=%.4f%%  exact bound (4-S)/2 -> %.4f%%",
                   r.bias_percent, 100.0 * (4.0 - tsirelson) / 2.0));
    }

    // 8. Brute-force lattice search agrees with the optimizer.
    {
        Timer t;
        const double step = 2e-3;
        const double slack = 6e-5;
        const double ic_grid =
            oracle::grid_max_equal_bias_p(CriterionKind::ic, tsirelson, step,
                                          slack);
        const double ml_grid =
            oracle::grid_max_equal_bias_p(CriterionKind::ml, tsirelson, step,
                                          slack);
        const double ic_diff = std::abs(ic_grid - ic_res.p_star);
        const double ml_diff = std::abs(ml_grid - ml_res.p_star);
        const double secs = t.seconds();
        const bool pass =
            ic_diff <= 2e-3 && ml_diff <= 2e-3 && secs < 600.0;
        report(8, "lattice oracle agreement", pass, secs,
               fmt("ic_grid=%.4f (diff %.1e)  ml_grid=%.4f (diff %.1e)",
                   ic_grid, ic_diff, ml_grid, ml_diff));
    }

    // 9. Monte Carlo sign correlations reproduce the arcsine law.
    {
        Timer t;
        MacroConfig cfg;
        cfg.pairs_per_run = 10000;
        cfg.runs = 10000;
        cfg.seed = 2026;
        bool pass = true;
        std::string detail;
        const CorrelationBox boxes[3] = {quantum_tsirelson_box(), pr_box(),
                                         uniform_box()};
        const char* names[3] = {"quantum", "pr", "uniform"};
        for (int i = 0; i < 3; ++i) {
            const MacroResult res = simulate_macroscopic(boxes[i], cfg);
            const double limit = theoretical_sign_chsh(boxes[i]);
            const double err = std::abs(res.sign_chsh - limit);
            const double allow = std::max(5.0 * res.stderr_sign_chsh, 0.02);
            if (err > allow)
                pass = false;
            detail += fmt("%s err=%.4f allow=%.4f  ", names[i], err, allow);
        }
        CounterRng rng(424242);
        int mismatches = 0;
        for (int i = 0; i < 1000; ++i) {
            const EqualBiasBox b = random_equal_bias(rng);
            const bool sat = ml_check_equal_bias(b).satisfied;
            const CorrelationBox box = box_from_equal_bias(b);
            const bool limit_ok =
                theoretical_sign_chsh(box) <= 2.0 + 1e-9;
            if (sat != limit_ok)
                ++mismatches;
        }
        detail += fmt("equivalence mismatches=%d/1000", mismatches);
        const double secs = t.seconds();
        pass = pass && mismatches == 0 && secs < 300.0;
        report(9, "monte carlo sign-chsh oracle", pass, secs, detail);
    }

    // 10. Property suites: specialization, round-trip, determinism, domain.
    {
        Timer t;
        CounterRng rng(31337);
        double consistency_err = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const EqualBiasBox b = random_equal_bias(rng);
            const CorrelationBox box = box_from_equal_bias(b);
            const CriterionReport gic = ic_check(box);
            const CriterionReport sic = ic_check_equal_bias(b);
            for (std::size_t k = 0; k < 2; ++k)
                consistency_err = std::max(
                    consistency_err, std::abs(gic.lhs[k] - sic.lhs[k]));
            const CriterionReport gml = ml_check(box);
            const CriterionReport sml = ml_check_equal_bias(b);
            consistency_err =
                std::max(consistency_err, std::abs(gml.lhs[0] - sml.lhs[0]));
        }

        double trip_err = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const NsParams p = random_ns_params(rng);
            const NsParams q = ns_params_from_box(box_from_ns_params(p));
            trip_err = std::max(
                {trip_err, std::abs(p.m1 - q.m1), std::abs(p.m2 - q.m2),
                 std::abs(p.n1 - q.n1), std::abs(p.n2 - q.n2)});
            for (std::size_t k = 0; k < 4; ++k)
                trip_err = std::max(trip_err, std::abs(p.c[k] - q.c[k]));
        }

        MacroConfig cfg;
        cfg.pairs_per_run = 500;
        cfg.runs = 2000;
        cfg.seed = 99;
        const CorrelationBox q = quantum_tsirelson_box();
        const MacroResult a = simulate_macroscopic(q, cfg);
        ::setenv("NONLOCALBOX_THREADS", "1", 1);
        const MacroResult b = simulate_macroscopic(q, cfg);
        ::setenv("NONLOCALBOX_THREADS", "7", 1);
        const MacroResult c = simulate_macroscopic(q, cfg);
        ::unsetenv("NONLOCALBOX_THREADS");
        bool deterministic = true;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                deterministic &= a.sign_corr[x][y] == b.sign_corr[x][y];
                deterministic &= a.sign_corr[x][y] == c.sign_corr[x][y];
                deterministic &= a.d_hat[x][y] == b.d_hat[x][y];
                deterministic &= a.d_hat[x][y] == c.d_hat[x][y];
            }
        deterministic &= a.sign_chsh == b.sign_chsh;
        deterministic &= a.sign_chsh == c.sign_chsh;

        int domain_failures = 0;
        for (int i = 0; i < 100000; ++i) {
            const NsParams p = random_ns_params(rng);
            const MlTerms terms = ml_terms(box_from_ns_params(p));
            for (double d : terms.d)
                if (!(std::abs(d) <= 1.0) || !std::isfinite(d))
                    ++domain_failures;
        }

        const bool pass = consistency_err <= 1e-12 && trip_err <= 1e-12 &&
                          deterministic && domain_failures == 0;
        report(10, "property suites", pass, t.seconds(),
               fmt("specialization=%.1e round_trip=%.1e deterministic=%s "
                   "domain_failures=%d",
                   consistency_err, trip_err, deterministic ? "yes" : "no",
                   domain_failures));
    }

    if (g_failures == 0)
        std::printf("all acceptance checks passed\n");
    else
        std::printf("%d acceptance check(s) failed\n", g_failures);
    return g_failures;
}
