#pragma once

/*
 * Two-party correlation boxes with binary settings and binary outcomes.
 *
 * A box is the conditional distribution P(a,b | x,y) for settings
 * x,y in {0,1} and outcomes a,b in {0,1}. Every no-signaling box is
 * reachable from eight parameters: the outcome-0 marginals
 * m1,m2 (Alice, settings 0/1), n1,n2 (Bob) and the four joint
 * probabilities c_xy = P(a=0,b=0 | x,y). The row for settings (x,y)
 * with marginals (m,n) and joint c is
 *
 *     ( c,  m - c,  n - c,  1 + c - m - n )
 *
 * over outcomes ab = 00, 01, 10, 11, which is a valid distribution iff
 * max{0, m + n - 1} <= c <= min{m, n}. The equally biased subfamily
 * fixes m1 = m2 = n1 = n2 = p.
 *
 * The CHSH functional used throughout is
 * |<00> + <01> + <10> - <11>| with <xy> the +/-1 outcome correlator.
 */

#include <array>
#include <cstddef>

#include "nonlocalbox/errors.hpp"

namespace nlb {

inline constexpr double kDefaultTolerance = 1e-9;

enum class Party { alice, bob };

// No-signaling parametrization. c[0..3] pair with the marginals as
// (c1,m1,n1), (c2,m1,n2), (c3,m2,n1), (c4,m2,n2); index is 2x + y.
struct NsParams {
    double m1 = 0.5;
    double m2 = 0.5;
    double n1 = 0.5;
    double n2 = 0.5;
    std::array<double, 4> c{0.25, 0.25, 0.25, 0.25};

    // Throws PositivityViolation naming the offending cell and the
    // excursion beyond its window; tol is the permitted slack.
    void validate(double tol = kDefaultTolerance) const;
};

// All four observables share the same outcome-0 probability p.
struct EqualBiasBox {
    double p = 0.5;
    std::array<double, 4> c{0.25, 0.25, 0.25, 0.25};

    void validate(double tol = kDefaultTolerance) const;
    NsParams as_ns_params() const { return NsParams{p, p, p, p, c}; }
};

struct Marginal {
    double p0 = 0;           // P(outcome 0)
    double p1 = 0;           // P(outcome 1)
    double discrepancy = 0;  // |p0 via other setting 0 - p0 via setting 1|
};

struct Correlators {
    std::array<double, 4> cxy{}; // <xy>, index 2x + y
    std::array<double, 2> cx{};  // Alice one-party correlators, Bob's setting 0
    std::array<double, 2> cy{};  // Bob one-party correlators, Alice's setting 0
};

// Immutable 4x4 table of P(a,b | x,y). Construction never validates;
// call validate() (or use the factory functions) to enforce the
// distribution and no-signaling invariants within `tolerance`.
class CorrelationBox {
  public:
    CorrelationBox() { prob_.fill(0.0625); }
    explicit CorrelationBox(const std::array<double, 16>& flat,
                            double tolerance = kDefaultTolerance)
        : prob_(flat), tol_(tolerance) {}

    double operator()(int x, int y, int a, int b) const {
        return prob_[static_cast<std::size_t>(((x * 2 + y) * 2 + a) * 2 + b)];
    }
    std::array<double, 4> row(int x, int y) const {
        std::size_t r = static_cast<std::size_t>(x * 2 + y) * 4;
        return {prob_[r], prob_[r + 1], prob_[r + 2], prob_[r + 3]};
    }
    const std::array<double, 16>& flat() const { return prob_; }
    double tolerance() const { return tol_; }

    // Positivity, row normalization and no-signaling, all within
    // tolerance(); throws the matching error otherwise.
    void validate() const;

  private:
    std::array<double, 16> prob_;
    double tol_ = kDefaultTolerance;
};

CorrelationBox box_from_ns_params(const NsParams& p,
                                  double tol = kDefaultTolerance);
CorrelationBox box_from_equal_bias(const EqualBiasBox& b,
                                   double tol = kDefaultTolerance);

// Recovers the eight no-signaling parameters (marginals read from the
// other party's setting 0).
NsParams ns_params_from_box(const CorrelationBox& box);

// Tsirelson-saturating quantum box: entries (1 +/- 1/sqrt(2))/4.
CorrelationBox quantum_tsirelson_box();
// Popescu-Rohrlich box (CHSH value 4).
CorrelationBox pr_box();
// All sixteen entries 1/4 (CHSH value 0).
CorrelationBox uniform_box();

// Outcome distribution of one observable. Computed with the other
// party's setting fixed to 0 and cross-checked against setting 1;
// a discrepancy above the box tolerance throws NoSignalingViolation.
Marginal marginal(const CorrelationBox& box, Party party, int setting);

// |1 - 2 P(outcome 0)| * 100 for the given observable.
double biasness_percent(const CorrelationBox& box, Party party, int setting);

Correlators correlators(const CorrelationBox& box);

// Signed CHSH combination <00> + <01> + <10> - <11>.
double chsh_signed(const CorrelationBox& box);
double chsh_signed(const NsParams& p);    // 2 + 4(c1+c2+c3-c4) - 4(m1+n1)
double chsh_signed(const EqualBiasBox& b); // 2 + 4(c1+c2+c3-c4) - 8p

// Absolute CHSH value |<00> + <01> + <10> - <11>|.
double chsh_value(const CorrelationBox& box);
double chsh_value(const NsParams& p);
double chsh_value(const EqualBiasBox& b);

} // namespace nlb
