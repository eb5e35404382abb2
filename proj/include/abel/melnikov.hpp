#pragma once

#include "abel/domain.hpp"
#include "abel/quadrature.hpp"

#include <vector>

namespace abel {

// Segments E1, E2 of the first-order closed form for a given theta1.
struct CaseSegments {
    CaseTag tag;
    Segment E1;
    Segment E2;  // empty for theta1 in {pi, 2pi}
};
CaseSegments case_segments(double theta1);

// Full first-order basis in Chebyshev order:
// (1, C_0..C_m on E1, S_m..S_1 on E1, C_0..C_m on E2), trimmed per case.
std::vector<BasisTerm> m1_basis(int m, double theta1, double alpha);

// Coefficients aligned with m1_basis(eq.m, eq.theta1, alpha).
std::vector<double> m1_coefficients(const AbelEquation& eq);

// The closed form with exactly-zero coefficients dropped.
LinearCombination m1_combination(const AbelEquation& eq);

// Cumulative integral of P1 + Q1~ |y0|^alpha over [0, theta].
double s1_hat(const AbelEquation& eq, double theta, double rho);

struct M2Parts {
    double p20 = 0.0;
    double q2 = 0.0;      // integral of Q2~ |y0|^alpha
    double p_part = 0.0;  // alpha * integral of Q1~ sigma|y0|^{alpha-1} int P1
    double double_integral = 0.0;  // alpha * integral of Q1~ sigma|y0|^{alpha-1} int Q1~|y0|^alpha
    double total() const { return p20 + q2 + p_part + double_integral; }
};

M2Parts m2_parts(const AbelEquation& eq, double rho);
double m2_direct(const AbelEquation& eq, double rho);

// m2(theta) = Q2~(theta) - (R(theta)/sin(theta))' under the center conditions.
double m2_integrand(const AbelEquation& eq, double theta);

// p20 + integral of m2 |y0|^alpha; the integration-by-parts form of M2.
double m2_by_parts(const AbelEquation& eq, double rho);

std::vector<BasisTerm> m2_basis(int m, double theta1, double alpha);

struct M2FitOptions {
    double lo = 0.0;  // 0 selects the default window of the branch
    double hi = 0.0;
    int extra_nodes = 10;
};

struct MelnikovResult {
    int order = 2;
    CaseTag tag = CaseTag::TwoPi;
    LinearCombination form;
    double fit_residual = 0.0;
    std::vector<double> nodes;
};

// Least-squares fit of m2_direct in the structured basis; StructuralFailure
// when the residual exceeds the configured tolerance.
MelnikovResult m2_structured(const AbelEquation& eq, const M2FitOptions& opt = {});

// Default fitting window on the branch where w = (1-p) y > 0.
RealInterval default_window(int branch);

std::vector<double> chebyshev_nodes(double lo, double hi, int n);

}  // namespace abel
