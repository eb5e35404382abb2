#include "abel/melnikov.hpp"

#include "abel/config.hpp"
#include "abel/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace abel {

CaseSegments case_segments(double theta1)
{
    CaseTag tag = case_of(theta1);
    switch (tag) {
    case CaseTag::Lower: return {tag, {0.0, theta1}, {theta1, kPi}};
    case CaseTag::Upper: return {tag, {0.0, kTwoPi - theta1}, {kTwoPi - theta1, kPi}};
    default: return {tag, {0.0, kPi}, {kPi, kPi}};
    }
}

std::vector<BasisTerm> m1_basis(int m, double theta1, double alpha)
{
    auto cs = case_segments(theta1);
    std::vector<BasisTerm> b{term_const()};
    for (int k = 0; k <= m; ++k) b.push_back(term_C(k, cs.E1, alpha));
    if (cs.tag == CaseTag::TwoPi) return b;
    for (int k = m; k >= 1; --k) b.push_back(term_S(k, cs.E1, alpha));
    if (cs.tag == CaseTag::Pi) return b;
    for (int k = 0; k <= m; ++k) b.push_back(term_C(k, cs.E2, alpha));
    return b;
}

std::vector<double> m1_coefficients(const AbelEquation& eq)
{
    const int m = eq.m;
    CaseTag tag = eq.tag();
    std::vector<double> c{eq.p10};
    auto dsum = [&](int k) { return eq.d_tilde(1, k, true) + eq.d_tilde(1, k, false); };
    if (tag == CaseTag::TwoPi) {
        for (int k = 0; k <= m; ++k) c.push_back(2.0 * eq.d_tilde(1, k, true));
        return c;
    }
    for (int k = 0; k <= m; ++k) c.push_back(dsum(k));
    for (int k = m; k >= 1; --k) c.push_back(eq.c_tilde(1, k, true) - eq.c_tilde(1, k, false));
    if (tag == CaseTag::Pi) return c;
    bool lower = tag == CaseTag::Lower;
    for (int k = 0; k <= m; ++k) c.push_back(2.0 * eq.d_tilde(1, k, !lower));
    return c;
}

RealInterval default_window(int branch)
{
    return branch > 0 ? RealInterval{0.2, 8.0} : RealInterval{-10.0, -2.2};
}

LinearCombination m1_combination(const AbelEquation& eq)
{
    auto basis = m1_basis(eq.m, eq.theta1, eq.alpha());
    auto coeffs = m1_coefficients(eq);
    LinearCombination lc;
    int br = positive_w_branch(eq.exps.p);
    lc.domain = br > 0 ? RealInterval{0.0, 1e300} : RealInterval{-1e300, -2.0};
    for (size_t i = 0; i < basis.size(); ++i)
        if (coeffs[i] != 0.0) lc.add(coeffs[i], basis[i]);
    return lc;
}

namespace {

QuadOptions tight() { return {1e-15, 1e-13, 1 << 14}; }

// Integral over [a, b] with a break at theta1 when it falls inside.
double split_integral(const std::function<double(double)>& f, double a, double b, double theta1,
                      const QuadOptions& opt)
{
    if (!(b > a)) return 0.0;
    if (theta1 > a && theta1 < b) return integrate(f, a, theta1, opt).value + integrate(f, theta1, b, opt).value;
    return integrate(f, a, b, opt).value;
}

double base_abs(double rho, double theta)
{
    if (rho > -1.0) {
        double h = std::sin(0.5 * theta);
        return std::fabs(rho + 2.0 * h * h);
    }
    double h = std::cos(0.5 * theta);
    return std::fabs((rho + 2.0) - 2.0 * h * h);
}

// Zone of theta for the integrand side of a split: the right-limit at theta1
// belongs to the minus zone, matching PiecewiseTrigPoly::value.
double q_tilde(const AbelEquation& eq, int i, double theta) { return eq.q_tilde(i, theta); }

double q1_integral(const AbelEquation& eq, double theta, double rho, double alpha)
{
    return split_integral([&](double t) { return q_tilde(eq, 1, t) * std::pow(base_abs(rho, t), alpha); }, 0.0,
                          theta, eq.theta1, tight());
}

}  // namespace

double s1_hat(const AbelEquation& eq, double theta, double rho)
{
    branch_sign(rho);
    if (theta <= 0.0) return 0.0;
    return eq.P1.integral_to(theta) + q1_integral(eq, theta, rho, eq.alpha());
}

M2Parts m2_parts(const AbelEquation& eq, double rho)
{
    int sigma = branch_sign(rho);
    const double a = eq.alpha();
    M2Parts out;
    out.p20 = eq.p20;
    auto opt = tight();
    out.q2 = split_integral([&](double t) { return q_tilde(eq, 2, t) * std::pow(base_abs(rho, t), a); }, 0.0, kTwoPi,
                            eq.theta1, opt);
    if (eq.Q1.is_zero(0.0)) return out;
    auto weight = [&](double t) { return a * sigma * q_tilde(eq, 1, t) * std::pow(base_abs(rho, t), a - 1.0); };
    out.p_part = split_integral([&](double t) { return weight(t) * eq.P1.integral_to(t); }, 0.0, kTwoPi, eq.theta1,
                                opt);
    // often cancels to zero, so the absolute tolerance follows the integrand's size
    double qmax = 0.0;
    for (const auto* z : {&eq.Q1.plus, &eq.Q1.minus})
        for (const auto& t : *z) qmax += std::fabs(t.s) + std::fabs(t.c);
    qmax *= eq.scale;
    double size = std::fabs(a) * qmax * qmax * kTwoPi * std::pow(std::fabs(rho + 1.0) + 1.0, 2.0 * a - 1.0);
    out.double_integral = split_integral([&](double t) { return weight(t) * q1_integral(eq, t, rho, a); }, 0.0,
                                         kTwoPi, eq.theta1, {std::max(1e-14, 1e-14 * size), 1e-12, 1 << 14});
    return out;
}

double m2_direct(const AbelEquation& eq, double rho)
{
    return m2_parts(eq, rho).total();
}

double m2_integrand(const AbelEquation& eq, double theta)
{
    if (eq.tag() == CaseTag::Pi) throw DomainError("m2_integrand requires theta1 != pi");
    auto cc = center_conditions(eq);
    if (!cc.holds) throw DomainError("m2_integrand requires the center conditions");
    // R/sin = F * sum_k c~_k U_{k-1}(cos theta), U_j(cos t) = sum of cos(l t), l = j, j-2, ..., -j
    double u = 0.0, du = 0.0;
    for (int k = 1; k <= eq.m; ++k) {
        double ck = eq.c_tilde(1, k, true);
        if (ck == 0.0) continue;
        int j = k - 1;
        double uj = (j % 2 == 0) ? 1.0 : 0.0, duj = 0.0;
        for (int l = j; l >= 1; l -= 2) {
            uj += 2.0 * std::cos(l * theta);
            duj -= 2.0 * l * std::sin(l * theta);
        }
        u += ck * uj;
        du += ck * duj;
    }
    double F = eq.P1.integral_to(theta);
    double derivative = eq.P1.value(theta) * u + F * du;
    return eq.q_tilde(2, theta) - derivative;
}

double m2_by_parts(const AbelEquation& eq, double rho)
{
    branch_sign(rho);
    const double a = eq.alpha();
    return eq.p20 + split_integral([&](double t) { return m2_integrand(eq, t) * std::pow(base_abs(rho, t), a); },
                                   0.0, kTwoPi, eq.theta1, tight());
}

std::vector<BasisTerm> m2_basis(int m, double theta1, double alpha)
{
    auto cs = case_segments(theta1);
    std::vector<BasisTerm> b{term_const()};
    if (cs.tag == CaseTag::TwoPi) {
        for (int k = 0; k <= 2 * m - 1; ++k) b.push_back(term_C(k, cs.E1, alpha));
        return b;
    }
    if (cs.tag == CaseTag::Pi) {
        b.push_back(term_pow_rho(alpha));
        b.push_back(term_pow_rho_plus2(alpha));
        for (int k = 1; k <= 2 * m - 1; ++k) b.push_back(term_S(k, cs.E1, alpha));
        for (int k = 0; k <= 2 * m - 1; ++k) b.push_back(term_C(k, cs.E1, alpha));
        return b;
    }
    for (int k = 1; k <= m - 1; ++k) b.push_back(term_D(k, cs.E1, alpha));
    for (int k = 1; k <= m - 1; ++k) b.push_back(term_D(k, cs.E2, alpha));
    for (int k = 1; k <= 2 * m - 1; ++k) b.push_back(term_S(k, cs.E1, alpha));
    for (int k = 1; k <= m - 1; ++k) b.push_back(term_S(k, cs.E2, alpha));
    for (int k = 0; k <= 2 * m - 1; ++k) b.push_back(term_C(k, cs.E1, alpha));
    for (int k = 0; k <= 2 * m - 1; ++k) b.push_back(term_C(k, cs.E2, alpha));
    return b;
}

std::vector<double> chebyshev_nodes(double lo, double hi, int n)
{
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) {
        double t = std::cos(kPi * (2.0 * j + 1.0) / (2.0 * n));
        x[n - 1 - j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
    }
    return x;
}

MelnikovResult m2_structured(const AbelEquation& eq, const M2FitOptions& opt)
{
    auto cc = center_conditions(eq);
    if (!cc.holds) throw DomainError("m2_structured requires the center conditions (M1 = 0)");
    if (eq.tag() == CaseTag::Pi && !hypothesis_h(eq))
        throw DomainError("m2_structured at theta1 = pi requires a1k+ = a1k-");
    int branch = positive_w_branch(eq.exps.p);
    RealInterval w = default_window(branch);
    if (opt.lo != 0.0 || opt.hi != 0.0) w = {opt.lo, opt.hi};
    branch_sign(w.lo);
    if (branch_sign(w.hi) != branch_sign(w.lo)) throw DomainError("fit window straddles the gap [-2, 0]");

    auto basis = m2_basis(eq.m, eq.theta1, eq.alpha());
    const int N = static_cast<int>(basis.size());
    MelnikovResult res;
    res.tag = eq.tag();
    res.nodes = chebyshev_nodes(w.lo, w.hi, N + std::max(5, opt.extra_nodes));
    const int R = static_cast<int>(res.nodes.size());
    Eigen::MatrixXd A(R, N);
    Eigen::VectorXd rhs(R);
    for (int i = 0; i < R; ++i) {
        rhs(i) = m2_direct(eq, res.nodes[i]);
        for (int j = 0; j < N; ++j) A(i, j) = eval_basis_ex(basis[j], res.nodes[i], tight()).value;
    }
    Eigen::VectorXd colscale(N);
    for (int j = 0; j < N; ++j) {
        colscale(j) = A.col(j).norm();
        if (colscale(j) == 0.0) colscale(j) = 1.0;
        A.col(j) /= colscale(j);
    }
    Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);
    Eigen::VectorXd r = A * x - rhs;
    double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    res.fit_residual = r.cwiseAbs().maxCoeff() / scale;
    res.form.domain = {w.lo, w.hi};
    for (int j = 0; j < N; ++j) res.form.add(x(j) / colscale(j), basis[j]);
    if (res.fit_residual > tolerances().fit_residual)
        throw StructuralFailure("structured M2 fit residual " + std::to_string(res.fit_residual) +
                                " exceeds tolerance");
    return res;
}

}  // namespace abel
