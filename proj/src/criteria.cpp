#include "nonlocalbox/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlb {

namespace {

constexpr double kDeterministicTol = 1e-12;
constexpr double kDExcursionTol = 1e-9;

double max_of(const std::vector<double>& v) {
    double m = v.front();
    for (double x : v)
        m = std::max(m, x);
    return m;
}

CriterionReport finish(CriterionReport r, double boundary_tol) {
    r.margin = r.bound - max_of(r.lhs);
    r.satisfied = r.margin >= -boundary_tol;
    return r;
}

// Positivity and normalization gate shared by the checks; the box may
// still be signaling, which the NS report is there to quantify.
void require_rows(const CorrelationBox& box) {
    double tol = std::max(box.tolerance(), kBoundaryTol);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double sum = 0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double v = box(x, y, a, b);
                    if (v < -tol || v > 1.0 + tol)
                        throw PositivityViolation(
                            "P(" + std::to_string(a) + std::to_string(b) +
                            "|" + std::to_string(x) + std::to_string(y) +
                            ") = " + std::to_string(v));
                    sum += v;
                }
            if (std::abs(sum - 1.0) > tol)
                throw NormalizationViolation(
                    "row (x=" + std::to_string(x) + ",y=" + std::to_string(y) +
                    ") sums to " + std::to_string(sum));
        }
}

double asin_clamped(double d) { return std::asin(std::clamp(d, -1.0, 1.0)); }

} // namespace

const char* to_string(CriterionKind k) {
    switch (k) {
    case CriterionKind::ns: return "ns";
    case CriterionKind::ic: return "ic";
    case CriterionKind::ml: return "ml";
    }
    return "?";
}

CriterionReport check_no_signaling(const CorrelationBox& box,
                                   double boundary_tol) {
    require_rows(box);
    CriterionReport r;
    r.kind = CriterionKind::ns;
    r.label = "no-signaling";
    r.bound = 0.0;
    double worst = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            double d = std::abs((box(x, 0, a, 0) + box(x, 0, a, 1)) -
                                (box(x, 1, a, 0) + box(x, 1, a, 1)));
            r.intermediates["defect_alice_x" + std::to_string(x) + "_a" +
                            std::to_string(a)] = d;
            worst = std::max(worst, d);
        }
    for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) {
            double d = std::abs((box(0, y, 0, b) + box(0, y, 1, b)) -
                                (box(1, y, 0, b) + box(1, y, 1, b)));
            r.intermediates["defect_bob_y" + std::to_string(y) + "_b" +
                            std::to_string(b)] = d;
            worst = std::max(worst, d);
        }
    r.lhs = {worst};
    return finish(std::move(r), boundary_tol);
}

CriterionReport ic_check(const CorrelationBox& box, double boundary_tol) {
    require_rows(box);
    auto p_eq = [&](int x, int y) { // P(a = b | x, y)
        return box(x, y, 0, 0) + box(x, y, 1, 1);
    };
    auto p_ne = [&](int x, int y) { // P(a != b | x, y)
        return box(x, y, 0, 1) + box(x, y, 1, 0);
    };
    // Success probabilities for guessing Bob's first/second data bit.
    double p1a = 0.5 * (p_eq(0, 0) + p_eq(1, 0));
    double p2a = 0.5 * (p_eq(0, 1) + p_ne(1, 1));
    double p1b = 0.5 * (p_eq(0, 0) + p_eq(0, 1));
    double p2b = 0.5 * (p_eq(1, 0) + p_ne(1, 1));
    double e1 = 2.0 * p1a - 1.0;
    double e2 = 2.0 * p2a - 1.0;
    double f1 = 2.0 * p1b - 1.0;
    double f2 = 2.0 * p2b - 1.0;

    CriterionReport r;
    r.kind = CriterionKind::ic;
    r.label = "IC necessary condition";
    r.bound = 1.0;
    r.lhs = {e1 * e1 + e2 * e2, f1 * f1 + f2 * f2};
    r.intermediates = {{"E1", e1}, {"E2", e2}, {"F1", f1}, {"F2", f2}};
    return finish(std::move(r), boundary_tol);
}

void ic_forms_equal_bias(double p, const std::array<double, 4>& c,
                         double& form_a, double& form_b) {
    double u = 1.0 - 4.0 * p;
    double s13 = c[0] + c[2];
    double s12 = c[0] + c[1];
    double d24 = c[1] - c[3];
    double d34 = c[2] - c[3];
    form_a = u * u + 4.0 * s13 * s13 + 4.0 * d24 * d24 + 4.0 * s13 * u;
    form_b = u * u + 4.0 * s12 * s12 + 4.0 * d34 * d34 + 4.0 * s12 * u;
}

CriterionReport ic_check_equal_bias(const EqualBiasBox& b,
                                    double boundary_tol) {
    b.validate();
    double fa, fb;
    ic_forms_equal_bias(b.p, b.c, fa, fb);
    double u = 1.0 - 4.0 * b.p;
    CriterionReport r;
    r.kind = CriterionKind::ic;
    r.label = "IC necessary condition";
    r.bound = 1.0;
    r.lhs = {fa, fb};
    r.intermediates = {{"E1", 2.0 * (b.c[0] + b.c[2]) + u},
                       {"E2", 2.0 * (b.c[1] - b.c[3])},
                       {"F1", 2.0 * (b.c[0] + b.c[1]) + u},
                       {"F2", 2.0 * (b.c[2] - b.c[3])}};
    return finish(std::move(r), boundary_tol);
}

MlTerms ml_terms(const CorrelationBox& box) {
    require_rows(box);
    MlTerms t;
    t.corr = correlators(box);
    static const char* names[4] = {"Alice setting 0", "Alice setting 1",
                                   "Bob setting 0", "Bob setting 1"};
    const double one_party[4] = {t.corr.cx[0], t.corr.cx[1], t.corr.cy[0],
                                 t.corr.cy[1]};
    for (int i = 0; i < 4; ++i)
        if (std::abs(one_party[i]) >= 1.0 - kDeterministicTol)
            throw DeterministicMarginal(std::string(names[i]) +
                                        " is deterministic (|C| = " +
                                        std::to_string(std::abs(one_party[i])) +
                                        ")");
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double cx = t.corr.cx[static_cast<std::size_t>(x)];
            double cy = t.corr.cy[static_cast<std::size_t>(y)];
            double denom = std::sqrt((1.0 - cx * cx) * (1.0 - cy * cy));
            double d =
                (t.corr.cxy[static_cast<std::size_t>(2 * x + y)] - cx * cy) /
                denom;
            if (std::abs(d) > 1.0 + kDExcursionTol)
                throw InvalidD("D_" + std::to_string(x) + std::to_string(y) +
                               " = " + std::to_string(d) + " exceeds 1");
            t.d[static_cast<std::size_t>(2 * x + y)] = std::clamp(d, -1.0, 1.0);
        }
    return t;
}

namespace {

CriterionReport ml_report_from_d(const std::array<double, 4>& d,
                                 double boundary_tol) {
    double lhs = std::abs(std::asin(d[0]) + std::asin(d[1]) + std::asin(d[2]) -
                          std::asin(d[3]));
    CriterionReport r;
    r.kind = CriterionKind::ml;
    r.label = "ML arcsine criterion";
    r.bound = std::numbers::pi;
    r.lhs = {lhs};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            r.intermediates["D_" + std::to_string(x) + std::to_string(y)] =
                d[static_cast<std::size_t>(2 * x + y)];
    return finish(std::move(r), boundary_tol);
}

} // namespace

CriterionReport ml_check(const CorrelationBox& box, double boundary_tol) {
    MlTerms t = ml_terms(box);
    CriterionReport r = ml_report_from_d(t.d, boundary_tol);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            r.intermediates["C_" + std::to_string(x) + std::to_string(y)] =
                t.corr.cxy[static_cast<std::size_t>(2 * x + y)];
    r.intermediates["C_x0"] = t.corr.cx[0];
    r.intermediates["C_x1"] = t.corr.cx[1];
    r.intermediates["C_y0"] = t.corr.cy[0];
    r.intermediates["C_y1"] = t.corr.cy[1];
    return r;
}

double ml_lhs_equal_bias(double p, const std::array<double, 4>& c) {
    double denom = p * (1.0 - p);
    double pp = p * p;
    return std::abs(asin_clamped((c[0] - pp) / denom) +
                    asin_clamped((c[1] - pp) / denom) +
                    asin_clamped((c[2] - pp) / denom) -
                    asin_clamped((c[3] - pp) / denom));
}

CriterionReport ml_check_equal_bias(const EqualBiasBox& b,
                                    double boundary_tol) {
    b.validate();
    if (b.p <= 0.0 || b.p >= 1.0)
        throw DegenerateBias("p = " + std::to_string(b.p) +
                             ": observables are deterministic");
    double denom = b.p * (1.0 - b.p);
    std::array<double, 4> d{};
    for (int i = 0; i < 4; ++i) {
        double v = (b.c[static_cast<std::size_t>(i)] - b.p * b.p) / denom;
        if (std::abs(v) > 1.0 + kDExcursionTol)
            throw InvalidD("D for cell " + std::to_string(i + 1) + " = " +
                           std::to_string(v) + " exceeds 1");
        d[static_cast<std::size_t>(i)] = std::clamp(v, -1.0, 1.0);
    }
    return ml_report_from_d(d, boundary_tol);
}

} // namespace nlb
