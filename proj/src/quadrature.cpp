#include "abel/quadrature.hpp"

#include "abel/config.hpp"
#include "abel/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace abel {

BasisTerm term_C(int k, Segment E, double beta) { return {Kind::C, k, E, beta}; }
BasisTerm term_S(int k, Segment E, double beta) { return {Kind::S, k, E, beta}; }
BasisTerm term_D(int k, Segment E, double beta) { return {Kind::D, k, E, beta}; }
BasisTerm term_pow_rho(double beta) { return {Kind::PowRho, 0, {}, beta}; }
BasisTerm term_pow_rho_plus2(double beta) { return {Kind::PowRhoPlus2, 0, {}, beta}; }
BasisTerm term_const() { return {Kind::Const, 0, {}, 0.0}; }

std::string format_angle(double x)
{
    if (x == 0.0) return "0";
    double twelfths = x / kPi * 12.0;
    double r = std::round(twelfths);
    if (std::fabs(twelfths - r) < 1e-9) {
        int num = static_cast<int>(r), den = 12;
        while (num % 2 == 0 && den % 2 == 0) num /= 2, den /= 2;
        while (num % 3 == 0 && den % 3 == 0) num /= 3, den /= 3;
        std::string s = (num == 1 ? "" : std::to_string(num)) + "pi";
        return den == 1 ? s : s + "/" + std::to_string(den);
    }
    std::ostringstream out;
    out.precision(10);
    out << x;
    return out.str();
}

std::string describe(const BasisTerm& t)
{
    auto seg = [&] { return "^[" + format_angle(t.E.a) + "," + format_angle(t.E.b) + "]"; };
    switch (t.kind) {
    case Kind::C: return "C_" + std::to_string(t.k) + seg();
    case Kind::S: return "S_" + std::to_string(t.k) + seg();
    case Kind::D: return "D_" + std::to_string(t.k) + seg();
    case Kind::PowRho: return "|rho|^beta";
    case Kind::PowRhoPlus2: return "|rho+2|^beta";
    case Kind::Const: return "1";
    }
    return "?";
}

QuadOptions QuadOptions::defaults()
{
    const auto& t = tolerances();
    return {t.quad_abs, t.quad_rel, t.quad_budget};
}

namespace {

struct GK21 {
    double xk[11];
    double wk[11];
    double wg[11];  // zero where the node is Kronrod-only
    GK21()
    {
        const auto& ka = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
        const auto& kw = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
        const auto& ga = boost::math::quadrature::gauss<double, 10>::abscissa();
        const auto& gw = boost::math::quadrature::gauss<double, 10>::weights();
        for (int i = 0; i < 11; ++i) {
            xk[i] = ka[i];
            wk[i] = kw[i];
            wg[i] = 0.0;
            for (size_t j = 0; j < ga.size(); ++j)
                if (std::fabs(ga[j] - ka[i]) < 1e-14) wg[i] = gw[j];
        }
    }
};

const GK21& gk21()
{
    static const GK21 rule;
    return rule;
}

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece apply_rule(const std::function<double(double)>& f, double a, double b)
{
    const auto& r = gk21();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double k = r.wk[0] * fc, g = r.wg[0] * fc;
    for (int i = 1; i < 11; ++i) {
        double dx = h * r.xk[i];
        double s = f(c - dx) + f(c + dx);
        k += r.wk[i] * s;
        g += r.wg[i] * s;
    }
    return {a, b, k * h, std::fabs((k - g) * h)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt)
{
    QuadResult out;
    if (!(b > a)) return out;
    std::priority_queue<Piece> heap;
    Piece first = apply_rule(f, a, b);
    heap.push(first);
    double total = first.value, err = first.error;
    int count = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
        if (count >= opt.budget)
            throw ConvergenceError("adaptive quadrature exceeded its budget of " +
                                   std::to_string(opt.budget) + " subintervals");
        Piece worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw ConvergenceError("adaptive quadrature cannot split a subinterval further");
        Piece left = apply_rule(f, worst.a, mid);
        Piece right = apply_rule(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
        if (count % 64 == 0) {
            // resum to shed drift from the running updates
            total = 0.0;
            err = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    out.value = 0.0;
    out.error = 0.0;
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error += heap.top().error;
        heap.pop();
    }
    out.intervals = count;
    return out;
}

double kernel_integrand(Kind kind, int k, double beta, double rho, double theta)
{
    // half-angle forms keep digits where the base nearly vanishes
    double base;
    if (rho > -1.0) {
        double h = std::sin(0.5 * theta);
        base = std::fabs(rho + 2.0 * h * h);
    } else {
        double h = std::cos(0.5 * theta);
        base = std::fabs((rho + 2.0) - 2.0 * h * h);
    }
    double w = std::pow(base, beta);
    double kt = static_cast<double>(k) * theta;
    switch (kind) {
    case Kind::C: return std::cos(kt) * w;
    case Kind::S: return std::sin(kt) * w;
    case Kind::D: return theta * std::sin(kt) * w;
    default: return 0.0;
    }
}

double check_base(const Segment& E, double rho, double beta)
{
    double cmax = std::max(std::cos(E.a), std::cos(E.b));
    double cmin = std::min(std::cos(E.a), std::cos(E.b));
    if (E.a <= 0.0 || E.b >= kTwoPi) cmax = 1.0;
    if (E.a <= kPi && E.b >= kPi) cmin = -1.0;
    double lo = 1.0 + rho - cmax, hi = 1.0 + rho - cmin;
    if (lo < 0.0 && hi > 0.0)
        throw DomainError("1 + rho - cos(theta) changes sign on [" + format_angle(E.a) + "," +
                          format_angle(E.b) + "] at rho = " + std::to_string(rho));
    double mn = std::min(std::fabs(lo), std::fabs(hi));
    if (mn == 0.0 && beta < 0.0)
        throw DomainError("kernel base vanishes on the segment at rho = " + std::to_string(rho));
    return mn;
}

QuadResult eval_basis_ex(const BasisTerm& t, double rho, const QuadOptions& opt)
{
    QuadResult r;
    switch (t.kind) {
    case Kind::Const: r.value = 1.0; return r;
    case Kind::PowRho: r.value = std::pow(std::fabs(rho), t.beta); return r;
    case Kind::PowRhoPlus2: r.value = std::pow(std::fabs(rho + 2.0), t.beta); return r;
    default: break;
    }
    if (t.E.a < 0.0 || t.E.b > kTwoPi + 1e-12)
        throw DomainError("segment must lie in [0, 2pi]");
    if (t.E.empty()) return r;
    if ((t.kind == Kind::S || t.kind == Kind::D) && t.k == 0) return r;
    double mn = check_base(t.E, rho, t.beta);
    Kind kind = t.kind;
    int k = t.k;
    double beta = t.beta;
    r = integrate([=](double th) { return kernel_integrand(kind, k, beta, rho, th); }, t.E.a, t.E.b, opt);
    r.near_boundary = mn < tolerances().near_boundary;
    return r;
}

double eval_basis(const BasisTerm& t, double rho)
{
    return eval_basis_ex(t, rho, QuadOptions::defaults()).value;
}

double shift_factor(double beta, int order, int sigma)
{
    double f = 1.0;
    for (int j = 0; j < order; ++j) f *= (beta - j) * sigma;
    return f;
}

double eval_basis_drho(const BasisTerm& t, double rho, int order, const QuadOptions& opt)
{
    if (order < 0) throw DomainError("derivative order must be non-negative");
    if (order > tolerances().max_drho_order)
        throw DomainError("derivative order " + std::to_string(order) + " exceeds the configured maximum " +
                          std::to_string(tolerances().max_drho_order));
    if (order == 0) return eval_basis_ex(t, rho, opt).value;
    switch (t.kind) {
    case Kind::Const: return 0.0;
    case Kind::PowRho: {
        int s = rho < 0 ? -1 : 1;
        return shift_factor(t.beta, order, s) * std::pow(std::fabs(rho), t.beta - order);
    }
    case Kind::PowRhoPlus2: {
        int s = rho + 2.0 < 0 ? -1 : 1;
        return shift_factor(t.beta, order, s) * std::pow(std::fabs(rho + 2.0), t.beta - order);
    }
    default: break;
    }
    // the sign of the base on E is the sign of rho's branch
    double cmid = std::cos(0.5 * (t.E.a + t.E.b));
    int sigma = 1.0 + rho - cmid < 0 ? -1 : 1;
    BasisTerm shifted = t;
    shifted.beta = t.beta - order;
    return shift_factor(t.beta, order, sigma) * eval_basis_ex(shifted, rho, opt).value;
}

double eval_basis_drho(const BasisTerm& t, double rho, int order)
{
    return eval_basis_drho(t, rho, order, QuadOptions::defaults());
}

std::vector<IdentityResidual> verify_interval_identities(int k, double theta1, double beta, double rho)
{
    case_of(theta1);
    QuadOptions opt{1e-15, 1e-14, 1 << 14};
    auto C = [&](double a, double b) { return eval_basis_ex(term_C(k, {a, b}, beta), rho, opt).value; };
    auto S = [&](double a, double b) { return eval_basis_ex(term_S(k, {a, b}, beta), rho, opt).value; };
    auto D = [&](double a, double b) { return eval_basis_ex(term_D(k, {a, b}, beta), rho, opt).value; };
    const double t = theta1, tp = kTwoPi;
    std::vector<IdentityResidual> out;
    if (t <= kPi + tolerances().theta_tag) {
        double s0 = S(0, t), sm = S(t, kPi);
        out.push_back({"S[t1,2pi] + S[0,t1]", std::fabs(S(t, tp) + s0)});
        out.push_back({"C[t1,2pi] - C[0,t1] - 2C[t1,pi]", std::fabs(C(t, tp) - C(0, t) - 2 * C(t, kPi))});
        out.push_back({"D[t1,2pi] - D[0,t1] - 2D[t1,pi] + 2pi(S[0,t1] + S[t1,pi])",
                       std::fabs(D(t, tp) - D(0, t) - 2 * D(t, kPi) + tp * (s0 + sm))});
    } else {
        double f = tp - t;
        double s0f = S(0, f), sfp = S(f, kPi);
        out.push_back({"S[0,t1] - S[0,2pi-t1]", std::fabs(S(0, t) - s0f)});
        out.push_back({"S[0,2pi-t1] + S[t1,2pi]", std::fabs(s0f + S(t, tp))});
        out.push_back({"C[0,t1] - C[0,2pi-t1] - 2C[2pi-t1,pi]", std::fabs(C(0, t) - C(0, f) - 2 * C(f, kPi))});
        out.push_back({"C[t1,2pi] - C[0,2pi-t1]", std::fabs(C(t, tp) - C(0, f))});
        out.push_back({"D[t1,2pi] - D[0,2pi-t1] + 2pi S[0,2pi-t1]", std::fabs(D(t, tp) - D(0, f) + tp * s0f)});
        out.push_back({"D[0,t1] - D[0,2pi-t1] - 2D[2pi-t1,pi] + 2pi S[2pi-t1,pi]",
                       std::fabs(D(0, t) - D(0, f) - 2 * D(f, kPi) + tp * sfp)});
    }
    return out;
}

double eval_combination(const LinearCombination& lc, double rho)
{
    double s = 0.0;
    for (size_t i = 0; i < lc.terms.size(); ++i)
        if (lc.coeffs[i] != 0.0) s += lc.coeffs[i] * eval_basis(lc.terms[i], rho);
    return s;
}

}  // namespace abel
