#include "nonlocalbox/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace nlb {

namespace {

// Worst-excess accepted as feasible during bisection. Kept a decade
// below the criteria's boundary tolerance so the assembled optimum
// re-validates under the default reports.
constexpr double kFeasibilityTol = 1e-10;
constexpr double kWindowPenalty = 10.0;  // scale on c4 window violations

struct Window {
    double lo, hi;
};

Window window_for(double p) { return {std::max(0.0, 2.0 * p - 1.0), p}; }

// Worst criterion excess over its bound at (p, c1, c2, c3) with c4
// eliminated via the signed CHSH equality. Out-of-window coordinates
// are clamped for the evaluation and penalized so the search is pulled
// back inside; the minimum itself is attained at penalty zero.
struct InnerObjective {
    CriterionKind kind;
    double p;
    double k; // required c1 + c2 + c3 - c4
    Window w;

    double operator()(const std::array<double, 3>& raw,
                      std::array<double, 4>* c_out = nullptr) const {
        double pull = 0;
        std::array<double, 4> c{};
        for (int i = 0; i < 3; ++i) {
            double v = raw[static_cast<std::size_t>(i)];
            double cc = std::clamp(v, w.lo, w.hi);
            pull += std::abs(v - cc);
            c[static_cast<std::size_t>(i)] = cc;
        }
        double c4 = c[0] + c[1] + c[2] - k;
        double viol = std::max({0.0, w.lo - c4, c4 - w.hi});
        c[3] = std::clamp(c4, w.lo, w.hi);

        double excess;
        if (kind == CriterionKind::ic) {
            double fa, fb;
            ic_forms_equal_bias(p, c, fa, fb);
            excess = std::max(fa, fb) - 1.0;
        } else {
            excess = ml_lhs_equal_bias(p, c) - std::numbers::pi;
        }
        if (c_out) {
            *c_out = c;
            (*c_out)[3] = c4; // exact elimination value
        }
        return std::max(excess, kWindowPenalty * viol) + kWindowPenalty * pull;
    }
};

struct InnerResult {
    double objective = 0;
    std::array<double, 4> c{};
};

// Standard Nelder-Mead on 3 coordinates; deterministic.
InnerResult nelder_mead(const InnerObjective& f, std::array<double, 3> x0,
                        double step, int iter_cap) {
    struct Vertex {
        std::array<double, 3> x;
        double fx;
    };
    std::array<Vertex, 4> s;
    s[0] = {x0, f(x0)};
    for (int i = 0; i < 3; ++i) {
        std::array<double, 3> x = x0;
        std::size_t ii = static_cast<std::size_t>(i);
        // step into the window when the start sits at the upper edge
        x[ii] += (x[ii] + step <= f.w.hi) ? step : -step;
        s[ii + 1] = {x, f(x)};
    }
    auto order = [&] {
        std::sort(s.begin(), s.end(),
                  [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
    };
    order();
    for (int it = 0; it < iter_cap; ++it) {
        if (s[3].fx - s[0].fx < 1e-13)
            break;
        std::array<double, 3> centroid{};
        for (int v = 0; v < 3; ++v)
            for (int i = 0; i < 3; ++i)
                centroid[static_cast<std::size_t>(i)] +=
                    s[static_cast<std::size_t>(v)].x[static_cast<std::size_t>(i)] / 3.0;
        auto at = [&](double t) {
            std::array<double, 3> x{};
            for (int i = 0; i < 3; ++i) {
                std::size_t ii = static_cast<std::size_t>(i);
                x[ii] = centroid[ii] + t * (centroid[ii] - s[3].x[ii]);
            }
            return x;
        };
        std::array<double, 3> xr = at(1.0);
        double fr = f(xr);
        if (fr < s[0].fx) {
            std::array<double, 3> xe = at(2.0);
            double fe = f(xe);
            s[3] = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < s[2].fx) {
            s[3] = {xr, fr};
        } else {
            std::array<double, 3> xc = at(fr < s[3].fx ? 0.5 : -0.5);
            double fc = f(xc);
            if (fc < std::min(fr, s[3].fx)) {
                s[3] = {xc, fc};
            } else {
                for (int v = 1; v < 4; ++v)
                    for (int i = 0; i < 3; ++i) {
                        std::size_t vv = static_cast<std::size_t>(v);
                        std::size_t ii = static_cast<std::size_t>(i);
                        s[vv].x[ii] = s[0].x[ii] + 0.5 * (s[vv].x[ii] - s[0].x[ii]);
                    }
                for (int v = 1; v < 4; ++v) {
                    std::size_t vv = static_cast<std::size_t>(v);
                    s[vv].fx = f(s[vv].x);
                }
            }
        }
        order();
    }
    InnerResult r;
    std::array<double, 4> c{};
    r.objective = f(s[0].x, &c);
    r.c = c;
    return r;
}

// Multistart over a deterministic grid inside the window; starts are
// scanned in lexicographic order and the first sufficiently good
// minimum short-circuits the scan.
InnerResult minimize_worst_excess(CriterionKind kind, double p, double target,
                                  const OptimizerOptions& opts) {
    Window w = window_for(p);
    double width = w.hi - w.lo;
    InnerObjective f{kind, p, (target - 2.0 + 8.0 * p) / 4.0, w};

    if (width <= 1e-15) { // single-point window (p = 1)
        std::array<double, 3> x{w.lo, w.lo, w.lo};
        std::array<double, 4> c{};
        InnerResult r;
        r.objective = f(x, &c);
        r.c = c;
        return r;
    }

    int per_axis = std::max(
        2, static_cast<int>(std::lround(std::cbrt(double(opts.inner_starts)))));
    auto grid_value = [&](int i) {
        return w.lo + width * static_cast<double>(i) /
                          static_cast<double>(per_axis - 1);
    };
    double step = width * 0.1;

    InnerResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j)
            for (int l = 0; l < per_axis; ++l) {
                std::array<double, 3> x0{grid_value(i), grid_value(j),
                                         grid_value(l)};
                InnerResult r = nelder_mead(f, x0, step, opts.inner_iter_cap);
                if (r.objective < best.objective)
                    best = r;
                if (best.objective <= 1e-12)
                    return best;
            }
    return best;
}

QuantumDistance distance_between(const CorrelationBox& a,
                                 const CorrelationBox& b) {
    QuantumDistance d;
    double tv = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double row_tv = 0;
            for (int aa = 0; aa < 2; ++aa)
                for (int bb = 0; bb < 2; ++bb) {
                    double diff = std::abs(a(x, y, aa, bb) - b(x, y, aa, bb));
                    d.max_abs = std::max(d.max_abs, diff);
                    row_tv += diff;
                }
            tv += 0.5 * row_tv;
        }
    d.total_variation = tv / 4.0;
    return d;
}

BiasMaxResult assemble(double p, const std::array<double, 4>& c,
                       CriterionKind kind, const OptimizerOptions& opts,
                       const std::string& method) {
    EqualBiasBox eb{p, c};
    BiasMaxResult res;
    res.p_star = p;
    res.bias_percent = std::abs(1.0 - 2.0 * p) * 100.0;
    res.chsh_value = chsh_value(eb);
    res.extremal_box = eb;
    res.extremal_params = eb.as_ns_params();
    switch (kind) {
    case CriterionKind::ns:
        res.report = check_no_signaling(box_from_equal_bias(eb));
        break;
    case CriterionKind::ic:
        res.report = ic_check_equal_bias(eb);
        break;
    case CriterionKind::ml:
        res.report = ml_check_equal_bias(eb);
        break;
    }
    res.distance_to_quantum =
        distance_between(box_from_equal_bias(eb), quantum_tsirelson_box());
    res.method = method;
    res.chsh_target = opts.chsh_target;
    res.seed = opts.seed;
    return res;
}

} // namespace

void OptimizerOptions::validate() const {
    if (!(chsh_target >= 2.0 && chsh_target <= 4.0))
        throw ConfigError("chsh_target must lie in [2, 4], got " +
                          std::to_string(chsh_target));
    if (!(p_bisection_tol > 0))
        throw ConfigError("p_bisection_tol must be positive");
    if (inner_starts < 8)
        throw ConfigError("inner_starts must be at least 8");
    if (inner_iter_cap < 100)
        throw ConfigError("inner_iter_cap must be at least 100");
}

BiasMaxResult max_equal_bias(CriterionKind kind, const OptimizerOptions& opts) {
    opts.validate();
    const double target = opts.chsh_target;
    const double p_ns = (6.0 - target) / 4.0; // positivity-only optimum

    if (kind == CriterionKind::ns) {
        std::array<double, 4> c{p_ns, p_ns, p_ns, 2.0 * p_ns - 1.0};
        return assemble(p_ns, c, kind, opts, "analytic");
    }

    auto evaluate = [&](double p) -> std::pair<bool, std::array<double, 4>> {
        if (kind == CriterionKind::ml && p >= 1.0)
            return {false, {}}; // correlation coefficients undefined at p = 1
        InnerResult r = minimize_worst_excess(kind, p, target, opts);
        return {r.objective <= kFeasibilityTol, r.c};
    };

    auto [lo_ok, lo_c] = evaluate(0.5);
    if (!lo_ok)
        throw InfeasibleTarget(
            std::string("no equally biased box satisfies the ") +
            to_string(kind) + " criterion at CHSH " + std::to_string(target));

    double lo = 0.5;
    std::array<double, 4> best_c = lo_c;
    auto [hi_ok, hi_c] = evaluate(p_ns);
    if (hi_ok) {
        lo = p_ns;
        best_c = hi_c;
    } else {
        double hi = p_ns;
        while (hi - lo > opts.p_bisection_tol) {
            double mid = 0.5 * (lo + hi);
            auto [ok, c] = evaluate(mid);
            if (ok) {
                lo = mid;
                best_c = c;
            } else {
                hi = mid;
            }
        }
    }
    return assemble(lo, best_c, kind, opts, "bisection+multistart");
}

BiasMaxResult max_single_bias_ns(double chsh_target) {
    if (!(chsh_target >= 2.0 && chsh_target <= 4.0))
        throw ConfigError("chsh_target must lie in [2, 4], got " +
                          std::to_string(chsh_target));
    // The window corners give CHSH <= 6 - 4 m1 whatever the other
    // marginals do, so the designated marginal of a box at CHSH S is
    // at most (6 - S)/4; the corner below attains it.
    double m1 = (6.0 - chsh_target) / 4.0;
    NsParams w;
    w.m1 = m1;
    w.m2 = 1.0 - m1;
    w.n1 = m1;
    w.n2 = m1;
    w.c = {m1, m1, 1.0 - m1, 0.0};

    BiasMaxResult res;
    res.p_star = m1;
    res.bias_percent = std::abs(1.0 - 2.0 * m1) * 100.0;
    res.chsh_value = chsh_value(w);
    res.extremal_box.reset(); // the witness is not equally biased
    res.extremal_params = w;
    res.report = check_no_signaling(box_from_ns_params(w));
    res.distance_to_quantum =
        distance_between(box_from_ns_params(w), quantum_tsirelson_box());
    res.method = "analytic";
    res.chsh_target = chsh_target;
    res.seed = 0;
    return res;
}

QuantumDistance distance_to_quantum(const CorrelationBox& box) {
    return distance_between(box, quantum_tsirelson_box());
}

} // namespace nlb
