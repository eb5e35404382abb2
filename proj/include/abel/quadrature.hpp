#pragma once

#include "abel/domain.hpp"

#include <functional>
#include <string>
#include <vector>

namespace abel {

enum class Kind { C, S, D, PowRho, PowRhoPlus2, Const };

// Closed subinterval [a, b] of [0, 2pi].
struct Segment {
    double a = 0.0;
    double b = 0.0;
    bool empty() const { return !(b > a); }
    bool operator==(const Segment&) const = default;
};

struct BasisTerm {
    Kind kind = Kind::Const;
    int k = 0;
    Segment E;
    double beta = 0.0;

    bool is_kernel() const { return kind == Kind::C || kind == Kind::S || kind == Kind::D; }
    bool operator==(const BasisTerm&) const = default;
};

BasisTerm term_C(int k, Segment E, double beta);
BasisTerm term_S(int k, Segment E, double beta);
BasisTerm term_D(int k, Segment E, double beta);
BasisTerm term_pow_rho(double beta);
BasisTerm term_pow_rho_plus2(double beta);
BasisTerm term_const();

// "C_1^[0,pi/2]" style label.
std::string describe(const BasisTerm& t);
std::string format_angle(double x);

struct LinearCombination {
    std::vector<double> coeffs;
    std::vector<BasisTerm> terms;
    RealInterval domain{-1e300, 1e300};

    void add(double c, const BasisTerm& t)
    {
        coeffs.push_back(c);
        terms.push_back(t);
    }
    size_t size() const { return terms.size(); }
};

struct QuadOptions {
    double abs_tol;
    double rel_tol;
    int budget;
    static QuadOptions defaults();
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool near_boundary = false;
};

// Globally adaptive Gauss-Kronrod (10/21) with bisection.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt);

// Kernel integrand trig(k theta) * |1 + rho - cos theta|^beta.
double kernel_integrand(Kind kind, int k, double beta, double rho, double theta);

// Throws DomainError when the base changes sign on E; returns min |base|.
double check_base(const Segment& E, double rho, double beta);

QuadResult eval_basis_ex(const BasisTerm& t, double rho, const QuadOptions& opt);
double eval_basis(const BasisTerm& t, double rho);

// order-th rho-derivative by the beta-shift recurrence.
double eval_basis_drho(const BasisTerm& t, double rho, int order);
double eval_basis_drho(const BasisTerm& t, double rho, int order, const QuadOptions& opt);

// sigma^n * beta (beta-1) ... (beta-n+1), the factor in front of K(rho, beta-n).
double shift_factor(double beta, int order, int sigma);

struct IdentityResidual {
    std::string name;
    double residual;
};

std::vector<IdentityResidual> verify_interval_identities(int k, double theta1, double beta, double rho);

double eval_combination(const LinearCombination& lc, double rho);

}  // namespace abel
