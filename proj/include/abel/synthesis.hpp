#pragma once

#include "abel/chebyshev.hpp"
#include "abel/domain.hpp"
#include "abel/quadrature.hpp"
#include "abel/wide.hpp"

#include <string>
#include <vector>

namespace abel {

struct RealizationTarget {
    const FunctionFamily* basis = nullptr;
    std::vector<double> nodes;  // N-1 distinct points inside the family's interval
    int pinned = -1;            // coefficient fixed to 1; negative means the last one
};

struct Interpolation {
    std::vector<Wide> coeffs;
    ZeroReport zeros;
    double max_node_error = 0.0;  // largest |zero - node| once counts agree, else infinity
};

// Solves combination(node_j) = 0 with the pinned coefficient equal to 1 and
// counts the zeros of the result over the family interval.
Interpolation interpolate_coefficients(const RealizationTarget& target, const ZeroOptions& zopt = {});

enum class NodeSpacing { Chebyshev, LogChebyshev };

struct RealizeOptions {
    int p = -1;
    int q = 2;
    double lo = 0.0;  // both zero: the default window of the branch
    double hi = 0.0;
    NodeSpacing spacing = NodeSpacing::Chebyshev;
};

struct Realization {
    int m = 0;
    CaseTag tag = CaseTag::TwoPi;
    double theta1 = kTwoPi;
    int order = 1;
    int p = -1, q = 2;
    double alpha = 0.0;
    RealInterval window;
    std::vector<BasisTerm> basis;
    std::vector<Wide> coeffs;
    std::vector<double> nodes;
    std::vector<double> zeros;
    int target = 0;
    int achieved = 0;
    bool certified = false;
    double max_node_error = 0.0;

    bool ok() const { return certified && achieved == target && max_node_error <= 1e-8; }
};

// Zero counts per case: order 1 is the exact value, order 2 the lower bound.
int table1_count(int m, CaseTag tag, int order);

// Basis used to realize the count: the first-order closed form for order 1,
// the beta2 = 0 family (generic), the pi family, or the leading 2m members of
// (1, C_0, ..., C_{2m-1}) at 2pi for order 2.
std::vector<BasisTerm> realization_basis(int m, double theta1, int order, double alpha);

// theta1 for the generic tags is pi/2 (Lower) and 5pi/4 (Upper).
double representative_theta1(CaseTag tag);

Realization realize_table1(int m, CaseTag tag, int order, const RealizeOptions& opt = {});
Realization realize_table1(int m, double theta1, int order, const RealizeOptions& opt = {});

RealInterval realization_window(int p);

// Inverse of the first-order coefficient identification under the gauge
// c~^- = 0; P1 is the constant p10 / (2pi) in both zones.
AbelEquation m1_to_equation(const std::vector<double>& coeffs, double theta1, int p, int q, int m);

// Random equation satisfying the center conditions (and a1k+ = a1k- at pi), c_{1m} != 0.
AbelEquation sample_center_equation(int m, double theta1, int p, int q, unsigned seed);

std::string realization_to_json_text(const Realization& r);
Realization realization_from_json_text(const std::string& text);

std::vector<double> realization_nodes(double lo, double hi, int n, NodeSpacing spacing, double anchor);

}  // namespace abel
