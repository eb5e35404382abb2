#include "abel/synthesis.hpp"

#include "abel/config.hpp"
#include "abel/error.hpp"
#include "abel/melnikov.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace abel {

namespace {

std::function<double(double)> evaluator(const FunctionFamily& f, const std::vector<Wide>& c,
                                        std::shared_ptr<KernelBank::Combination>& keep)
{
    if (auto kf = dynamic_cast<const KernelFamily*>(&f)) {
        keep = std::make_shared<KernelBank::Combination>(kf->bank().combine(c));
        auto comb = keep;
        return [comb](double x) { return (*comb)(x); };
    }
    return [&f, c](double x) {
        auto v = f.values(Wide(x));
        Wide s = 0;
        for (size_t i = 0; i < c.size(); ++i) s += c[i] * v[i];
        return static_cast<double>(s);
    };
}

}  // namespace

Interpolation interpolate_coefficients(const RealizationTarget& target, const ZeroOptions& zopt)
{
    if (!target.basis) throw DomainError("realization target has no basis");
    const FunctionFamily& f = *target.basis;
    const int N = static_cast<int>(f.size());
    if (static_cast<int>(target.nodes.size()) != N - 1)
        throw DomainError("need exactly " + std::to_string(N - 1) + " nodes for a family of size " +
                          std::to_string(N));
    int pin = target.pinned < 0 ? N - 1 : target.pinned;
    if (pin >= N) throw DomainError("pinned index out of range");
    auto iv = f.interval();
    auto nodes = target.nodes;
    std::sort(nodes.begin(), nodes.end());
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (!(nodes[i] > iv.lo && nodes[i] < iv.hi)) throw DomainError("node outside the family interval");
        if (i && nodes[i] == nodes[i - 1]) throw DomainError("nodes must be distinct");
    }
    WideMatrix M(N);
    std::vector<Wide> rhs(N, Wide(0));
    for (int a = 0; a < N - 1; ++a) {
        auto v = f.values(Wide(nodes[a]));
        for (int i = 0; i < N; ++i) M(a, i) = v[i];
    }
    M(N - 1, pin) = 1;
    rhs[N - 1] = 1;
    Interpolation out;
    out.coeffs = solve(M, rhs);

    std::shared_ptr<KernelBank::Combination> keep;
    auto fn = evaluator(f, out.coeffs, keep);
    out.zeros = count_zeros(fn, iv.lo, iv.hi, zopt);
    if (out.zeros.count == N - 1) {
        for (int i = 0; i < N - 1; ++i)
            out.max_node_error = std::max(out.max_node_error, std::fabs(out.zeros.zeros[i].location - nodes[i]));
    } else {
        out.max_node_error = std::numeric_limits<double>::infinity();
    }
    return out;
}

int table1_count(int m, CaseTag tag, int order)
{
    bool generic = tag == CaseTag::Lower || tag == CaseTag::Upper;
    if (order == 1) return generic ? 3 * m + 2 : (tag == CaseTag::Pi ? 2 * m + 1 : m + 1);
    if (order == 2) return generic ? 7 * m - 3 : (tag == CaseTag::Pi ? 4 * m + 1 : 2 * m - 1);
    throw DomainError("order must be 1 or 2");
}

std::vector<BasisTerm> realization_basis(int m, double theta1, int order, double alpha)
{
    if (m < 1) throw DomainError("realizations need m >= 1");
    if (order == 1) return m1_basis(m, theta1, alpha);
    if (order != 2) throw DomainError("order must be 1 or 2");
    auto seg = case_segments(theta1);
    std::vector<BasisTerm> f;
    switch (seg.tag) {
    case CaseTag::TwoPi:
        f.push_back(term_const());
        for (int k = 0; k <= 2 * m - 2; ++k) f.push_back(term_C(k, seg.E1, alpha));
        return f;
    case CaseTag::Pi:
        return family_kernel_pi(m, alpha);
    default:
        f.push_back(term_C(0, seg.E1, alpha));
        for (int k = 1; k <= m - 1; ++k) {
            f.push_back(term_C(k, seg.E1, alpha));
            f.push_back(term_S(k, seg.E1, alpha));
            f.push_back(term_D(k, seg.E1, alpha));
        }
        for (int k = m; k <= 2 * m - 1; ++k) f.push_back(term_C(k, seg.E1, alpha));
        for (int k = 2 * m - 1; k >= m; --k) f.push_back(term_S(k, seg.E1, alpha));
        for (int k = 0; k <= 2 * m - 1; ++k) f.push_back(term_C(k, seg.E2, alpha));
        return f;
    }
}

double representative_theta1(CaseTag tag)
{
    switch (tag) {
    case CaseTag::Lower: return kPi / 2;
    case CaseTag::Upper: return 5 * kPi / 4;
    case CaseTag::Pi: return kPi;
    case CaseTag::TwoPi: return kTwoPi;
    }
    return kTwoPi;
}

RealInterval realization_window(int p)
{
    return positive_w_branch(p) > 0 ? RealInterval{0.3, 6.0} : RealInterval{-8.0, -2.3};
}

std::vector<double> realization_nodes(double lo, double hi, int n, NodeSpacing spacing, double anchor)
{
    if (spacing == NodeSpacing::Chebyshev) return chebyshev_nodes(lo, hi, n);
    double s = lo > anchor ? 1.0 : -1.0;
    auto t = chebyshev_nodes(std::log(std::fabs(lo - anchor)), std::log(std::fabs(hi - anchor)), n);
    std::vector<double> x;
    for (double v : t) x.push_back(anchor + s * std::exp(v));
    std::sort(x.begin(), x.end());
    return x;
}

Realization realize_table1(int m, CaseTag tag, int order, const RealizeOptions& opt)
{
    return realize_table1(m, representative_theta1(tag), order, opt);
}

Realization realize_table1(int m, double theta1, int order, const RealizeOptions& opt)
{
    Realization r;
    r.m = m;
    r.theta1 = theta1;
    r.tag = case_of(theta1);
    r.order = order;
    r.p = opt.p;
    r.q = opt.q;
    r.alpha = alpha_of(opt.p, opt.q).value();
    r.window = (opt.lo != 0.0 || opt.hi != 0.0) ? RealInterval{opt.lo, opt.hi} : realization_window(opt.p);
    if (branch_sign(r.window.lo) != positive_w_branch(opt.p) || branch_sign(r.window.hi) != positive_w_branch(opt.p))
        throw DomainError("realization window must lie on the branch where (1-p) y > 0");
    r.basis = realization_basis(m, theta1, order, r.alpha);
    r.target = table1_count(m, r.tag, order);
    if (static_cast<int>(r.basis.size()) != r.target + 1)
        throw StructuralFailure("basis size does not match the target count");
    double anchor = positive_w_branch(opt.p) > 0 ? 0.0 : -2.0;
    r.nodes = realization_nodes(r.window.lo, r.window.hi, r.target, opt.spacing, anchor);
    KernelFamily fam(r.basis, r.window.lo, r.window.hi);
    RealizationTarget t{&fam, r.nodes, -1};
    ZeroOptions zo;
    if (opt.spacing == NodeSpacing::LogChebyshev) {
        zo.geometric = true;
        zo.anchor = anchor;
    }
    auto res = interpolate_coefficients(t, zo);
    r.coeffs = res.coeffs;
    for (const auto& z : res.zeros.zeros) r.zeros.push_back(z.location);
    r.achieved = res.zeros.simple_count;
    r.certified = res.zeros.certified && res.zeros.count == res.zeros.simple_count;
    r.max_node_error = res.max_node_error;
    return r;
}

AbelEquation m1_to_equation(const std::vector<double>& coeffs, double theta1, int p, int q, int m)
{
    auto exps = make_exponents(p, q);
    CaseTag tag = case_of(theta1);
    size_t expect = m1_basis(m, theta1, exps.alpha.value()).size();
    if (coeffs.size() != expect)
        throw DomainError("coefficient vector has " + std::to_string(coeffs.size()) + " entries, the basis has " +
                          std::to_string(expect));
    double scale = real_normalized_scale(p, exps.alpha);
    auto P1 = PiecewiseTrigPoly::zero(m, theta1);
    auto Q1 = PiecewiseTrigPoly::zero(m, theta1);
    P1.plus[0].c = P1.minus[0].c = coeffs[0] / kTwoPi;
    if (tag == CaseTag::TwoPi) {
        for (int k = 0; k <= m; ++k) Q1.plus[k].c = coeffs[1 + k] / (2.0 * scale);
        Q1.minus = Q1.plus;
        return make_equation(p, q, m, theta1, P1, {}, Q1, {});
    }
    for (int k = 0; k <= m; ++k) {
        double mu1 = coeffs[1 + k];
        double dp = mu1, dm = 0.0;
        if (tag != CaseTag::Pi) {
            double mu2 = coeffs[1 + (m + 1) + m + k];
            if (tag == CaseTag::Lower) {
                dm = mu2 / 2.0;
                dp = mu1 - dm;
            } else {
                dp = mu2 / 2.0;
                dm = mu1 - dp;
            }
        }
        Q1.plus[k].c = dp / scale;
        Q1.minus[k].c = dm / scale;
    }
    for (int k = 1; k <= m; ++k) Q1.plus[k].s = coeffs[1 + (m + 1) + (m - k)] / scale;
    return make_equation(p, q, m, theta1, P1, {}, Q1, {});
}

AbelEquation sample_center_equation(int m, double theta1, int p, int q, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CaseTag tag = case_of(theta1);
    auto random_poly = [&] {
        auto P = PiecewiseTrigPoly::zero(m, theta1);
        for (int k = 0; k <= m; ++k) {
            P.plus[k] = {k ? u(rng) : 0.0, u(rng)};
            P.minus[k] = {k ? u(rng) : 0.0, u(rng)};
        }
        if (tag == CaseTag::TwoPi) P.minus = P.plus;
        return P;
    };
    auto P1 = random_poly();
    if (tag == CaseTag::Pi)
        for (int k = 1; k <= m; ++k) P1.minus[k].s = P1.plus[k].s;
    double shift = -P1.total() / kTwoPi;
    P1.plus[0].c += shift;
    P1.minus[0].c += shift;
    auto Q1 = PiecewiseTrigPoly::zero(m, theta1);
    for (int k = 1; k <= m; ++k) Q1.plus[k].s = Q1.minus[k].s = u(rng);
    if (m >= 1) {
        double& c = Q1.plus[m].s;
        if (std::fabs(c) < 0.25) c = c < 0 ? -0.25 : 0.25;
        Q1.minus[m].s = c;
    }
    if (tag == CaseTag::Pi)
        for (int k = 0; k <= m; ++k) {
            Q1.plus[k].c = u(rng);
            Q1.minus[k].c = -Q1.plus[k].c;
        }
    auto P2 = random_poly();
    auto Q2 = random_poly();
    return make_equation(p, q, m, theta1, P1, P2, Q1, Q2);
}

namespace {

using nlohmann::json;

const char* kind_name(Kind k)
{
    switch (k) {
    case Kind::C: return "C";
    case Kind::S: return "S";
    case Kind::D: return "D";
    case Kind::PowRho: return "rho^b";
    case Kind::PowRhoPlus2: return "(rho+2)^b";
    case Kind::Const: return "1";
    }
    return "?";
}

Kind kind_from(const std::string& s)
{
    for (Kind k : {Kind::C, Kind::S, Kind::D, Kind::PowRho, Kind::PowRhoPlus2, Kind::Const})
        if (s == kind_name(k)) return k;
    throw DomainError("unknown basis kind '" + s + "'");
}

}  // namespace

std::string realization_to_json_text(const Realization& r)
{
    json j;
    j["m"] = r.m;
    j["case"] = case_name(r.tag);
    j["theta1"] = r.theta1;
    j["order"] = r.order;
    j["p"] = r.p;
    j["q"] = r.q;
    j["alpha"] = r.alpha;
    j["window"] = {r.window.lo, r.window.hi};
    json basis = json::array();
    for (const auto& t : r.basis)
        basis.push_back({{"label", describe(t)},
                         {"kind", kind_name(t.kind)},
                         {"k", t.k},
                         {"segment", {t.E.a, t.E.b}},
                         {"beta", t.beta}});
    j["basis"] = basis;
    json c = json::array();
    for (const auto& w : r.coeffs) c.push_back(wide_to_string(w));
    j["coefficients"] = c;
    j["nodes"] = r.nodes;
    j["zeros"] = r.zeros;
    j["target"] = r.target;
    j["achieved"] = r.achieved;
    j["certified"] = r.certified;
    j["max_node_error"] = r.max_node_error;
    return j.dump(2);
}

Realization realization_from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t at = e.byte > 0 ? std::min(text.size(), static_cast<size_t>(e.byte - 1)) : 0;
        int line = 1, col = 1;
        for (size_t i = 0; i < at; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(e.what(), line, col);
    }
    try {
        Realization r;
        r.m = j.at("m");
        r.theta1 = j.at("theta1");
        r.tag = case_of(r.theta1);
        r.order = j.at("order");
        r.p = j.at("p");
        r.q = j.at("q");
        r.alpha = j.at("alpha");
        r.window = {j.at("window")[0], j.at("window")[1]};
        for (const auto& b : j.at("basis")) {
            BasisTerm t;
            t.kind = kind_from(b.at("kind"));
            t.k = b.at("k");
            t.E = {b.at("segment")[0], b.at("segment")[1]};
            t.beta = b.at("beta");
            r.basis.push_back(t);
        }
        for (const auto& c : j.at("coefficients")) r.coeffs.push_back(wide_from_string(c.get<std::string>()));
        r.nodes = j.at("nodes").get<std::vector<double>>();
        r.zeros = j.at("zeros").get<std::vector<double>>();
        r.target = j.at("target");
        r.achieved = j.at("achieved");
        r.certified = j.at("certified");
        r.max_node_error = j.at("max_node_error");
        return r;
    } catch (const json::exception& e) {
        throw DomainError(std::string("realization record: ") + e.what());
    }
}

}  // namespace abel
