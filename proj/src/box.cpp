#include "nonlocalbox/box.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace nlb {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void check_window(const char* cell, double c, double m, double n, double tol) {
    double lo = std::max(0.0, m + n - 1.0);
    double hi = std::min(m, n);
    double excess = std::max(lo - c, c - hi);
    if (excess > tol) {
        throw PositivityViolation(std::string(cell) + ": c=" + fmt(c) +
                                  " outside window [" + fmt(lo) + ", " +
                                  fmt(hi) + "] by " + fmt(excess));
    }
}

void check_unit(const char* name, double v, double tol) {
    if (!(v >= -tol && v <= 1.0 + tol))
        throw PositivityViolation(std::string(name) + "=" + fmt(v) +
                                  " not in [0, 1]");
}

} // namespace

void NsParams::validate(double tol) const {
    check_unit("m1", m1, tol);
    check_unit("m2", m2, tol);
    check_unit("n1", n1, tol);
    check_unit("n2", n2, tol);
    check_window("c1 (x=0,y=0)", c[0], m1, n1, tol);
    check_window("c2 (x=0,y=1)", c[1], m1, n2, tol);
    check_window("c3 (x=1,y=0)", c[2], m2, n1, tol);
    check_window("c4 (x=1,y=1)", c[3], m2, n2, tol);
}

void EqualBiasBox::validate(double tol) const {
    check_unit("p", p, tol);
    as_ns_params().validate(tol);
}

void CorrelationBox::validate() const {
    static const char* rows[4] = {"(x=0,y=0)", "(x=0,y=1)", "(x=1,y=0)",
                                  "(x=1,y=1)"};
    for (int r = 0; r < 4; ++r) {
        double sum = 0;
        for (int k = 0; k < 4; ++k) {
            double v = prob_[static_cast<std::size_t>(4 * r + k)];
            if (v < -tol_ || v > 1.0 + tol_)
                throw PositivityViolation("entry " + std::to_string(k) +
                                          " of row " + rows[r] + " is " +
                                          fmt(v));
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol_)
            throw NormalizationViolation("row " + std::string(rows[r]) +
                                         " sums to " + fmt(sum));
    }
    // Marginals of each party must not depend on the other's setting.
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            double d = std::abs(((*this)(x, 0, a, 0) + (*this)(x, 0, a, 1)) -
                                ((*this)(x, 1, a, 0) + (*this)(x, 1, a, 1)));
            if (d > tol_)
                throw NoSignalingViolation(
                    "Alice setting " + std::to_string(x) + ", outcome " +
                    std::to_string(a) + ": marginal differs by " + fmt(d) +
                    " between Bob's settings");
        }
    for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) {
            double d = std::abs(((*this)(0, y, 0, b) + (*this)(0, y, 1, b)) -
                                ((*this)(1, y, 0, b) + (*this)(1, y, 1, b)));
            if (d > tol_)
                throw NoSignalingViolation(
                    "Bob setting " + std::to_string(y) + ", outcome " +
                    std::to_string(b) + ": marginal differs by " + fmt(d) +
                    " between Alice's settings");
        }
}

CorrelationBox box_from_ns_params(const NsParams& p, double tol) {
    p.validate(tol);
    std::array<double, 16> flat{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double m = (x == 0) ? p.m1 : p.m2;
            double n = (y == 0) ? p.n1 : p.n2;
            double c = p.c[static_cast<std::size_t>(2 * x + y)];
            std::size_t r = static_cast<std::size_t>(2 * x + y) * 4;
            flat[r + 0] = c;
            flat[r + 1] = m - c;
            flat[r + 2] = n - c;
            flat[r + 3] = 1.0 + c - m - n;
        }
    return CorrelationBox(flat, tol);
}

CorrelationBox box_from_equal_bias(const EqualBiasBox& b, double tol) {
    return box_from_ns_params(b.as_ns_params(), tol);
}

NsParams ns_params_from_box(const CorrelationBox& box) {
    NsParams p;
    p.m1 = box(0, 0, 0, 0) + box(0, 0, 0, 1);
    p.m2 = box(1, 0, 0, 0) + box(1, 0, 0, 1);
    p.n1 = box(0, 0, 0, 0) + box(0, 0, 1, 0);
    p.n2 = box(0, 1, 0, 0) + box(0, 1, 1, 0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            p.c[static_cast<std::size_t>(2 * x + y)] = box(x, y, 0, 0);
    return p;
}

CorrelationBox quantum_tsirelson_box() {
    const double s = std::sqrt(2.0);
    EqualBiasBox b;
    b.p = 0.5;
    b.c = {(2.0 + s) / 8.0, (2.0 + s) / 8.0, (2.0 + s) / 8.0, (2.0 - s) / 8.0};
    return box_from_equal_bias(b);
}

CorrelationBox pr_box() {
    EqualBiasBox b;
    b.p = 0.5;
    b.c = {0.5, 0.5, 0.5, 0.0};
    return box_from_equal_bias(b);
}

CorrelationBox uniform_box() {
    EqualBiasBox b;
    b.p = 0.5;
    b.c = {0.25, 0.25, 0.25, 0.25};
    return box_from_equal_bias(b);
}

Marginal marginal(const CorrelationBox& box, Party party, int setting) {
    double via0, via1;
    if (party == Party::alice) {
        via0 = box(setting, 0, 0, 0) + box(setting, 0, 0, 1);
        via1 = box(setting, 1, 0, 0) + box(setting, 1, 0, 1);
    } else {
        via0 = box(0, setting, 0, 0) + box(0, setting, 1, 0);
        via1 = box(1, setting, 0, 0) + box(1, setting, 1, 0);
    }
    Marginal m;
    m.discrepancy = std::abs(via0 - via1);
    if (m.discrepancy > box.tolerance())
        throw NoSignalingViolation(
            std::string(party == Party::alice ? "Alice" : "Bob") +
            " setting " + std::to_string(setting) +
            ": marginal depends on the remote setting (differs by " +
            fmt(m.discrepancy) + ")");
    m.p0 = via0;
    m.p1 = 1.0 - via0;
    return m;
}

double biasness_percent(const CorrelationBox& box, Party party, int setting) {
    return std::abs(1.0 - 2.0 * marginal(box, party, setting).p0) * 100.0;
}

Correlators correlators(const CorrelationBox& box) {
    Correlators c;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            c.cxy[static_cast<std::size_t>(2 * x + y)] =
                box(x, y, 0, 0) + box(x, y, 1, 1) - box(x, y, 0, 1) -
                box(x, y, 1, 0);
    for (int x = 0; x < 2; ++x)
        c.cx[static_cast<std::size_t>(x)] = box(x, 0, 0, 0) + box(x, 0, 0, 1) -
                                            box(x, 0, 1, 0) - box(x, 0, 1, 1);
    for (int y = 0; y < 2; ++y)
        c.cy[static_cast<std::size_t>(y)] = box(0, y, 0, 0) + box(0, y, 1, 0) -
                                            box(0, y, 0, 1) - box(0, y, 1, 1);
    return c;
}

double chsh_signed(const CorrelationBox& box) {
    Correlators c = correlators(box);
    return c.cxy[0] + c.cxy[1] + c.cxy[2] - c.cxy[3];
}

double chsh_signed(const NsParams& p) {
    return 2.0 + 4.0 * (p.c[0] + p.c[1] + p.c[2] - p.c[3]) -
           4.0 * (p.m1 + p.n1);
}

double chsh_signed(const EqualBiasBox& b) {
    return 2.0 + 4.0 * (b.c[0] + b.c[1] + b.c[2] - b.c[3]) - 8.0 * b.p;
}

double chsh_value(const CorrelationBox& box) { return std::abs(chsh_signed(box)); }
double chsh_value(const NsParams& p) { return std::abs(chsh_signed(p)); }
double chsh_value(const EqualBiasBox& b) { return std::abs(chsh_signed(b)); }

} // namespace nlb
