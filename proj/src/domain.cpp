#include "abel/domain.hpp"

#include "abel/config.hpp"
#include "abel/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <regex>
#include <sstream>

namespace abel {

namespace {

double pow_abs(double b, double e) { return std::pow(std::fabs(b), e); }

}  // namespace

Rational alpha_of(int p, int q)
{
    if (p == 0 || p == 1 || q == 0 || q == 1)
        throw DomainError("p and q must avoid {0, 1} (got p=" + std::to_string(p) +
                          ", q=" + std::to_string(q) + ")");
    long num = q - p;
    long den = 1 - p;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    Rational r{num / g, den / g};
    // alpha a non-negative integer <=> (q-1)/(p-1) an integer <= 1
    if (r.den == 1 && r.num >= 0)
        throw DomainError("alpha = " + std::to_string(r.num) +
                          " is a non-negative integer; (q-1)/(p-1) must avoid Z_{<=1}");
    return r;
}

ExponentPair make_exponents(int p, int q)
{
    return ExponentPair{p, q, alpha_of(p, q)};
}

double real_normalized_scale(int p, Rational alpha)
{
    return pow_abs(1.0 - p, alpha.value());
}

AnnulusDomain annulus_of(int p)
{
    if (p == 0 || p == 1) throw DomainError("p must avoid {0, 1}");
    const double inf = std::numeric_limits<double>::infinity();
    AnnulusDomain d;
    bool odd = (p % 2) != 0;
    if (odd && p > 1) {
        d.y_intervals = {{-inf, -2.0}};
    } else if (odd) {
        d.y_intervals = {{0.0, inf}};
    } else {
        d.y_intervals = {{-inf, -2.0}, {0.0, inf}};
    }
    if (odd && p < 1) {
        d.x_intervals = {{-inf, 0.0}, {0.0, inf}};
        return d;  // 2p-2 < 0 has no real even root
    }
    double base = 2.0 * p - 2.0;
    double expo = 1.0 / (1.0 - p);
    // 1-p is odd whenever the base is negative, so the real root exists
    double h = base >= 0 ? std::pow(base, expo) : -std::pow(-base, expo);
    d.hp = h;
    if (p > 1 && odd)
        d.x_intervals = {{-h, 0.0}, {0.0, h}};
    else if (p > 1)
        d.x_intervals = {{-inf, 0.0}, {0.0, h}};
    else
        d.x_intervals = {{-inf, h}, {0.0, inf}};
    return d;
}

int branch_sign(double rho)
{
    if (rho > 0.0) return 1;
    if (rho < -2.0) return -1;
    throw DomainError("rho = " + std::to_string(rho) +
                      " lies outside the reduced annulus (-inf,-2) U (0,inf)");
}

int positive_w_branch(int p)
{
    return p < 1 ? 1 : -1;
}

PiecewiseTrigPoly PiecewiseTrigPoly::zero(int m, double theta1)
{
    PiecewiseTrigPoly z;
    z.m = m;
    z.theta1 = theta1;
    z.plus.assign(m + 1, TrigPair{});
    z.minus.assign(m + 1, TrigPair{});
    return z;
}

double PiecewiseTrigPoly::eval_zone(const std::vector<TrigPair>& z, double theta)
{
    double v = 0.0;
    for (size_t k = 0; k < z.size(); ++k) {
        double kt = static_cast<double>(k) * theta;
        v += z[k].s * std::sin(kt) + z[k].c * std::cos(kt);
    }
    return v;
}

double PiecewiseTrigPoly::value(double theta) const
{
    return eval_zone(zone(theta), theta);
}

namespace {

// Integral of one zone over [a, b].
double zone_integral(const std::vector<TrigPair>& z, double a, double b)
{
    double v = 0.0;
    for (size_t k = 0; k < z.size(); ++k) {
        if (k == 0) {
            v += z[0].c * (b - a);
            continue;
        }
        double kk = static_cast<double>(k);
        v += z[k].s * (std::cos(kk * a) - std::cos(kk * b)) / kk;
        v += z[k].c * (std::sin(kk * b) - std::sin(kk * a)) / kk;
    }
    return v;
}

}  // namespace

double PiecewiseTrigPoly::integral_to(double theta) const
{
    if (theta <= theta1) return zone_integral(plus, 0.0, theta);
    return zone_integral(plus, 0.0, theta1) + zone_integral(minus, theta1, theta);
}

bool PiecewiseTrigPoly::is_zero(double tol) const
{
    for (const auto& z : {plus, minus})
        for (const auto& t : z)
            if (std::fabs(t.s) > tol || std::fabs(t.c) > tol) return false;
    return true;
}

std::string case_name(CaseTag tag)
{
    switch (tag) {
    case CaseTag::Lower: return "theta1-in-(0,pi)";
    case CaseTag::Upper: return "theta1-in-(pi,2pi)";
    case CaseTag::Pi: return "theta1=pi";
    case CaseTag::TwoPi: return "theta1=2pi";
    }
    return "?";
}

CaseTag case_of(double theta1)
{
    double tol = tolerances().theta_tag;
    if (!(theta1 > 0.0) || theta1 > kTwoPi + tol)
        throw DomainError("theta1 must lie in (0, 2pi]");
    if (std::fabs(theta1 - kPi) <= tol) return CaseTag::Pi;
    if (std::fabs(theta1 - kTwoPi) <= tol) return CaseTag::TwoPi;
    return theta1 < kPi ? CaseTag::Lower : CaseTag::Upper;
}

double parse_angle(const std::string& text)
{
    static const std::regex pat(R"(^\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
    std::smatch mt;
    if (std::regex_match(text, mt, pat)) {
        double num = mt[1].length() ? std::stod(mt[1].str()) : 1.0;
        double den = mt[2].matched ? std::stod(mt[2].str()) : 1.0;
        if (num == 2.0 && den == 1.0) return kTwoPi;
        return num * kPi / den;
    }
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw DomainError("cannot parse angle '" + text + "'");
}

double AbelEquation::c_tilde(int i, int k, bool plus) const
{
    const auto& Q = i == 1 ? Q1 : Q2;
    return scale * (plus ? Q.plus : Q.minus)[k].s;
}

double AbelEquation::d_tilde(int i, int k, bool plus) const
{
    const auto& Q = i == 1 ? Q1 : Q2;
    return scale * (plus ? Q.plus : Q.minus)[k].c;
}

double AbelEquation::q_tilde(int i, double theta) const
{
    return scale * (i == 1 ? Q1 : Q2).value(theta);
}

AbelEquation make_equation(int p, int q, int m, double theta1, PiecewiseTrigPoly P1,
                           PiecewiseTrigPoly P2, PiecewiseTrigPoly Q1, PiecewiseTrigPoly Q2)
{
    if (m < 0) throw DomainError("degree m must be non-negative");
    AbelEquation eq;
    eq.exps = make_exponents(p, q);
    CaseTag tag = case_of(theta1);
    if (tag == CaseTag::Pi) theta1 = kPi;
    if (tag == CaseTag::TwoPi) theta1 = kTwoPi;
    eq.m = m;
    eq.theta1 = theta1;
    const char* names[] = {"P1", "P2", "Q1", "Q2"};
    PiecewiseTrigPoly* polys[] = {&P1, &P2, &Q1, &Q2};
    for (int i = 0; i < 4; ++i) {
        auto& poly = *polys[i];
        if (poly.plus.empty() && poly.minus.empty()) poly = PiecewiseTrigPoly::zero(m, theta1);
        if (tag == CaseTag::TwoPi && poly.minus.empty()) poly.minus = poly.plus;
        if (static_cast<int>(poly.plus.size()) != m + 1 || static_cast<int>(poly.minus.size()) != m + 1)
            throw DomainError(std::string(names[i]) + " must carry m+1 coefficient pairs per zone");
        poly.m = m;
        poly.theta1 = theta1;
        if (tag == CaseTag::TwoPi) {
            for (int k = 0; k <= m; ++k)
                if (poly.plus[k].s != poly.minus[k].s || poly.plus[k].c != poly.minus[k].c)
                    throw DomainError(std::string(names[i]) +
                                      ": zones must coincide when theta1 = 2pi");
        }
        // sin(0) carries no information; keep the slot but clear it
        poly.plus[0].s = 0.0;
        poly.minus[0].s = 0.0;
    }
    eq.P1 = std::move(P1);
    eq.P2 = std::move(P2);
    eq.Q1 = std::move(Q1);
    eq.Q2 = std::move(Q2);
    eq.scale = real_normalized_scale(p, eq.exps.alpha);
    eq.p10 = eq.P1.total();
    eq.p20 = eq.P2.total();
    return eq;
}

CenterCheck center_conditions(const AbelEquation& eq)
{
    CenterCheck out;
    double tol = tolerances().zero_coeff;
    auto fail = [&](const std::string& msg) {
        out.holds = false;
        out.violations.push_back(msg);
    };
    if (std::fabs(eq.p10) > tol) fail("p10!=0");
    bool at_pi = eq.tag() == CaseTag::Pi;
    for (int k = 0; k <= eq.m; ++k) {
        std::string ks = std::to_string(k);
        double dp = eq.d_tilde(1, k, true), dm = eq.d_tilde(1, k, false);
        double cp = eq.c_tilde(1, k, true), cm = eq.c_tilde(1, k, false);
        if (at_pi) {
            if (std::fabs(dp + dm) > tol) fail("d~1" + ks + "+ != -d~1" + ks + "-");
        } else {
            if (std::fabs(dp) > tol) fail("d~1" + ks + "+!=0");
            if (std::fabs(dm) > tol) fail("d~1" + ks + "-!=0");
        }
        if (k >= 1 && std::fabs(cp - cm) > tol) fail("c~1" + ks + "+ != c~1" + ks + "-");
    }
    return out;
}

bool hypothesis_h(const AbelEquation& eq)
{
    double tol = tolerances().zero_coeff;
    for (int k = 1; k <= eq.m; ++k)
        if (std::fabs(eq.P1.plus[k].s - eq.P1.minus[k].s) > tol) return false;
    return true;
}

namespace {

using nlohmann::json;

PiecewiseTrigPoly poly_from_json(const json& j, int m, double theta1, const std::string& name)
{
    PiecewiseTrigPoly poly;
    poly.m = m;
    poly.theta1 = theta1;
    auto read_zone = [&](const char* key) {
        std::vector<TrigPair> z;
        if (!j.contains(key)) return z;
        const auto& arr = j.at(key);
        if (!arr.is_array()) throw DomainError(name + "." + key + " must be an array");
        for (const auto& pair : arr) {
            if (!pair.is_array() || pair.size() != 2)
                throw DomainError(name + "." + key + " entries must be [a_k, b_k] pairs");
            z.push_back(TrigPair{pair[0].get<double>(), pair[1].get<double>()});
        }
        return z;
    };
    poly.plus = read_zone("plus");
    poly.minus = read_zone("minus");
    return poly;
}

json poly_to_json(const PiecewiseTrigPoly& poly)
{
    json j;
    for (const char* key : {"plus", "minus"}) {
        json arr = json::array();
        for (const auto& t : std::string(key) == "plus" ? poly.plus : poly.minus)
            arr.push_back({t.s, t.c});
        j[key] = arr;
    }
    return j;
}

std::pair<int, int> line_column(const std::string& text, size_t byte)
{
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

AbelEquation equation_from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte is one past the offending character
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + e.what(),
                         line, col);
    }
    try {
        int p = j.at("p").get<int>();
        int q = j.at("q").get<int>();
        int m = j.at("m").get<int>();
        const auto& t = j.at("theta1");
        double theta1 = t.is_string() ? parse_angle(t.get<std::string>()) : t.get<double>();
        PiecewiseTrigPoly polys[4];
        const char* names[] = {"P1", "P2", "Q1", "Q2"};
        for (int i = 0; i < 4; ++i)
            if (j.contains(names[i])) polys[i] = poly_from_json(j.at(names[i]), m, theta1, names[i]);
        return make_equation(p, q, m, theta1, polys[0], polys[1], polys[2], polys[3]);
    } catch (const json::exception& e) {
        throw DomainError(std::string("equation schema: ") + e.what());
    }
}

AbelEquation load_equation(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open equation file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return equation_from_json_text(ss.str());
}

std::string equation_to_json_text(const AbelEquation& eq)
{
    json j;
    j["p"] = eq.exps.p;
    j["q"] = eq.exps.q;
    j["m"] = eq.m;
    switch (eq.tag()) {
    case CaseTag::Pi: j["theta1"] = "pi"; break;
    case CaseTag::TwoPi: j["theta1"] = "2pi"; break;
    default: j["theta1"] = eq.theta1;
    }
    j["P1"] = poly_to_json(eq.P1);
    j["P2"] = poly_to_json(eq.P2);
    j["Q1"] = poly_to_json(eq.Q1);
    j["Q2"] = poly_to_json(eq.Q2);
    return j.dump(2);
}

}  // namespace abel
