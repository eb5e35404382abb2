#pragma once

#include <optional>
#include <string>
#include <vector>

namespace abel {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Rational {
    long num = 0;
    long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

struct ExponentPair {
    int p = 0;
    int q = 0;
    Rational alpha;
};

// alpha = (q - p) / (1 - p) in lowest terms; DomainError on inadmissible pairs.
Rational alpha_of(int p, int q);
ExponentPair make_exponents(int p, int q);

// |1 - p|^alpha, the positive scale standing in for (1 - p)^alpha.
double real_normalized_scale(int p, Rational alpha);

// Open interval, possibly unbounded.
struct RealInterval {
    double lo;
    double hi;
    bool contains(double x) const { return x > lo && x < hi; }
};

struct AnnulusDomain {
    std::vector<RealInterval> x_intervals;
    std::vector<RealInterval> y_intervals;
    std::optional<double> hp;
};

AnnulusDomain annulus_of(int p);

// Sign of 1 + rho - cos(theta), which is constant on each component of the
// reduced annulus. DomainError for rho in [-2, 0].
int branch_sign(double rho);

// Component on which w = (1-p) y stays positive; validation integrates there.
int positive_w_branch(int p);

// (sine coefficient, cosine coefficient) of one harmonic.
struct TrigPair {
    double s = 0.0;
    double c = 0.0;
};

struct PiecewiseTrigPoly {
    int m = 0;
    double theta1 = kTwoPi;
    std::vector<TrigPair> plus;
    std::vector<TrigPair> minus;

    static PiecewiseTrigPoly zero(int m, double theta1);

    const std::vector<TrigPair>& zone(double theta) const { return theta < theta1 ? plus : minus; }
    double value(double theta) const;
    // Value of a single zone irrespective of theta1.
    static double eval_zone(const std::vector<TrigPair>& z, double theta);
    // Exact integral over [0, theta], honouring the split.
    double integral_to(double theta) const;
    double total() const { return integral_to(kTwoPi); }
    bool is_zero(double tol) const;
};

enum class CaseTag { Lower, Upper, Pi, TwoPi };

std::string case_name(CaseTag tag);
CaseTag case_of(double theta1);

// Parses "pi", "2pi", "pi/2", "3pi/4", or a plain number.
double parse_angle(const std::string& text);

struct AbelEquation {
    ExponentPair exps;
    int m = 0;
    double theta1 = kTwoPi;
    PiecewiseTrigPoly P1, P2, Q1, Q2;
    double scale = 1.0;
    double p10 = 0.0;
    double p20 = 0.0;

    double alpha() const { return exps.alpha.value(); }
    CaseTag tag() const { return case_of(theta1); }
    // Q coefficient scaled by |1-p|^alpha; i is 1 or 2, plus zone when `plus`.
    double c_tilde(int i, int k, bool plus) const;
    double d_tilde(int i, int k, bool plus) const;
    double q_tilde(int i, double theta) const;
};

// Validates shapes and the smooth-case invariant, fills the caches.
AbelEquation make_equation(int p, int q, int m, double theta1, PiecewiseTrigPoly P1,
                           PiecewiseTrigPoly P2, PiecewiseTrigPoly Q1, PiecewiseTrigPoly Q2);

struct CenterCheck {
    bool holds = true;
    std::vector<std::string> violations;
};

CenterCheck center_conditions(const AbelEquation& eq);

// The condition a_{1k}^+ = a_{1k}^- used at theta1 = pi.
bool hypothesis_h(const AbelEquation& eq);

AbelEquation equation_from_json_text(const std::string& text);
AbelEquation load_equation(const std::string& path);
std::string equation_to_json_text(const AbelEquation& eq);

}  // namespace abel
