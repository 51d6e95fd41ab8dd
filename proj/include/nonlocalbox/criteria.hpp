#pragma once

/*
 * Necessary conditions a box must satisfy to be physically reasonable.
 *
 * No-signaling: marginals independent of the remote setting; the
 * reported left-hand side is the largest marginal defect, bound 0.
 *
 * Information-causality necessary condition (van Dam / Pawlowski
 * style): with E_i = 2 P_i^A - 1 and F_i = 2 P_i^B - 1 built from the
 * success probabilities of the two-bit random-access guessing game,
 * both E1^2 + E2^2 <= 1 and F1^2 + F2^2 <= 1 must hold, bound 1.
 *
 * Macroscopic locality: with D_xy the marginal-corrected correlators,
 * |asin D_00 + asin D_01 + asin D_10 - asin D_11| <= pi, bound pi.
 */

#include <array>
#include <map>
#include <string>
#include <vector>

#include "nonlocalbox/box.hpp"

namespace nlb {

inline constexpr double kBoundaryTol = 1e-9;

enum class CriterionKind { ns, ic, ml };

const char* to_string(CriterionKind k);

struct CriterionReport {
    CriterionKind kind = CriterionKind::ns;
    std::string label;
    std::vector<double> lhs;       // quantities compared against bound
    double bound = 0;
    double margin = 0;             // bound - max(lhs)
    bool satisfied = false;        // margin >= -boundary_tol
    std::map<std::string, double> intermediates;
};

// Largest absolute marginal no-signaling defect, compared against 0.
CriterionReport check_no_signaling(const CorrelationBox& box,
                                   double boundary_tol = kBoundaryTol);

// Both quadratic forms of the information-causality condition.
CriterionReport ic_check(const CorrelationBox& box,
                         double boundary_tol = kBoundaryTol);

// Equally biased specialization, written directly in (p, c):
//   (1-4p)^2 + 4(c1+c3)^2 + 4(c2-c4)^2 + 4(c1+c3)(1-4p) <= 1
//   (1-4p)^2 + 4(c1+c2)^2 + 4(c3-c4)^2 + 4(c1+c2)(1-4p) <= 1
CriterionReport ic_check_equal_bias(const EqualBiasBox& b,
                                    double boundary_tol = kBoundaryTol);

// Arcsine criterion on the marginal-corrected correlators
// D_xy = (C_xy - C_x C_y) / sqrt((1 - C_x^2)(1 - C_y^2)).
CriterionReport ml_check(const CorrelationBox& box,
                         double boundary_tol = kBoundaryTol);

// Equally biased specialization with D_xy = (c_xy - p^2) / (p (1 - p)).
CriterionReport ml_check_equal_bias(const EqualBiasBox& b,
                                    double boundary_tol = kBoundaryTol);

// Marginal-corrected correlators shared by ml_check and the
// macroscopic simulator. Throws DeterministicMarginal when any
// one-party correlator reaches +/-1 within 1e-12, and InvalidD when a
// D exceeds 1 by more than 1e-9 (smaller excursions are clamped).
struct MlTerms {
    std::array<double, 4> d{};
    Correlators corr;
};
MlTerms ml_terms(const CorrelationBox& box);

// Plain lhs evaluators used by both the reports and the optimizer.
void ic_forms_equal_bias(double p, const std::array<double, 4>& c,
                         double& form_a, double& form_b);
double ml_lhs_equal_bias(double p, const std::array<double, 4>& c);

} // namespace nlb
