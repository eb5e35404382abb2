#include "abel/kernel_bank.hpp"

#include "abel/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace abel {

namespace {

constexpr int kGaussPoints = 30;
constexpr double kPanelRatio = 0.7;
constexpr double kMaxPanel = 0.8;

// Angles that are multiples of pi/12 are rebuilt in quad precision.
Wide snap_angle(double x)
{
    double r = x / kPi * 12.0;
    double n = std::round(r);
    if (std::fabs(r - n) < 1e-12) return Wide(n) * wide_pi() / 12;
    return Wide(x);
}

Wide shift_factor_wide(double beta, int order, int sigma)
{
    Wide f = 1;
    for (int j = 0; j < order; ++j) f *= Wide(beta - j) * sigma;
    return f;
}

}  // namespace

KernelBank::KernelBank(std::vector<BasisTerm> terms, double rho_lo, double rho_hi)
    : terms_(std::move(terms)), lo_(rho_lo), hi_(rho_hi)
{
    if (!(rho_hi >= rho_lo)) throw DomainError("kernel bank window must satisfy lo <= hi");
    int s_lo = branch_sign(rho_lo), s_hi = branch_sign(rho_hi);
    if (s_lo != s_hi) throw DomainError("kernel bank window straddles the gap [-2, 0]");
    branch_ = s_lo;
    sing_imag_ = branch_ > 0 ? std::acosh(1.0 + rho_lo) : std::acosh(-1.0 - rho_hi);
    group_of_.assign(terms_.size(), -1);
    for (size_t i = 0; i < terms_.size(); ++i) {
        const auto& t = terms_[i];
        if (!t.is_kernel()) continue;
        if (t.E.empty() || ((t.kind == Kind::S || t.kind == Kind::D) && t.k == 0)) continue;
        check_base(t.E, rho_lo, t.beta);
        check_base(t.E, rho_hi, t.beta);
        size_t g = 0;
        for (; g < groups_.size(); ++g)
            if (groups_[g].E == t.E && groups_[g].beta == t.beta) break;
        if (g == groups_.size()) {
            Group grp;
            grp.E = t.E;
            grp.beta = t.beta;
            groups_.push_back(std::move(grp));
        }
        groups_[g].members.push_back(i);
        group_of_[i] = static_cast<int>(g);
    }
    for (auto& g : groups_) build_group(g);
}

size_t KernelBank::node_count() const
{
    size_t n = 0;
    for (const auto& g : groups_) n += g.theta.size();
    return n;
}

void KernelBank::build_group(Group& g) const
{
    std::vector<double> sing = branch_ > 0 ? std::vector<double>{0.0, kTwoPi} : std::vector<double>{kPi};
    double d = sing_imag_;
    std::vector<std::pair<double, double>> panels;
    std::function<void(double, double)> split = [&](double a, double b) {
        double dist = 1e300;
        for (double s : sing) {
            double dx = std::max({0.0, a - s, s - b});
            dist = std::min(dist, std::sqrt(dx * dx + d * d));
        }
        if (b - a <= std::min(kMaxPanel, kPanelRatio * dist)) {
            panels.emplace_back(a, b);
            return;
        }
        double m = 0.5 * (a + b);
        split(a, m);
        split(m, b);
    };
    split(g.E.a, g.E.b);

    const auto& xs = boost::math::quadrature::gauss<Wide, kGaussPoints>::abscissa();
    const auto& ws = boost::math::quadrature::gauss<Wide, kGaussPoints>::weights();
    Wide A = snap_angle(g.E.a), B = snap_angle(g.E.b);
    Wide len = B - A;
    double dlen = g.E.b - g.E.a;
    for (auto [pa, pb] : panels) {
        // panel ends measured relative to the exact segment ends
        Wide a = pa == g.E.a ? A : (pa == g.E.b ? B : A + len * Wide((pa - g.E.a) / dlen));
        Wide b = pb == g.E.a ? A : (pb == g.E.b ? B : A + len * Wide((pb - g.E.a) / dlen));
        Wide c = (a + b) / 2, h = (b - a) / 2;
        for (size_t i = 0; i < xs.size(); ++i) {
            for (int sgn : {-1, 1}) {
                Wide th = c + sgn * h * xs[i];
                Wide sh = sin(th / 2), ch = cos(th / 2);
                g.theta.push_back(th);
                g.half_sin2.push_back(2 * sh * sh);
                g.half_cos2.push_back(2 * ch * ch);
                g.weight.push_back(h * ws[i]);
            }
        }
    }
    g.trig.resize(g.members.size());
    for (size_t j = 0; j < g.members.size(); ++j) {
        const auto& t = terms_[g.members[j]];
        auto& tw = g.trig[j];
        tw.resize(g.theta.size());
        for (size_t n = 0; n < g.theta.size(); ++n) {
            Wide kt = Wide(t.k) * g.theta[n];
            Wide f = t.kind == Kind::C ? cos(kt) : sin(kt);
            if (t.kind == Kind::D) f *= g.theta[n];
            tw[n] = g.weight[n] * f;
        }
    }
}

int KernelBank::bases(const Group& g, const Wide& rho, std::vector<Wide>& b) const
{
    size_t n = g.theta.size();
    b.resize(n);
    if (rho > -1) {
        for (size_t i = 0; i < n; ++i) b[i] = rho + g.half_sin2[i];
    } else {
        Wide r2 = rho + 2;
        for (size_t i = 0; i < n; ++i) b[i] = r2 - g.half_cos2[i];
    }
    int sigma = b[0] < 0 ? -1 : 1;
    for (size_t i = 0; i < n; ++i) {
        if ((b[i] < 0 ? -1 : 1) != sigma || b[i] == 0)
            throw DomainError("kernel base changes sign for rho = " +
                              std::to_string(static_cast<double>(rho)));
        if (sigma < 0) b[i] = -b[i];
    }
    return sigma;
}

void KernelBank::jet(const Wide& rho, int order, std::vector<Wide>& out) const
{
    const size_t N = terms_.size();
    out.assign(static_cast<size_t>(order + 1) * N, Wide(0));
    std::vector<Wide> b, p, inv, acc(static_cast<size_t>(order + 1));
    for (const auto& g : groups_) {
        int sigma = bases(g, rho, b);
        size_t n = b.size();
        p.resize(n);
        inv.resize(n);
        for (size_t i = 0; i < n; ++i) {
            p[i] = wide_pow(b[i], g.beta);
            inv[i] = 1 / b[i];
        }
        std::vector<Wide> cur(p);
        for (int j = 0; j <= order; ++j) {
            Wide f = shift_factor_wide(g.beta, j, sigma);
            for (size_t m = 0; m < g.members.size(); ++m) {
                const auto& tw = g.trig[m];
                Wide s = 0;
                for (size_t i = 0; i < n; ++i) s += tw[i] * cur[i];
                out[static_cast<size_t>(j) * N + g.members[m]] = f * s;
            }
            if (j < order)
                for (size_t i = 0; i < n; ++i) cur[i] *= inv[i];
        }
    }
    for (size_t i = 0; i < N; ++i) {
        const auto& t = terms_[i];
        if (t.kind == Kind::Const) {
            out[i] = 1;
        } else if (t.kind == Kind::PowRho || t.kind == Kind::PowRhoPlus2) {
            Wide x = t.kind == Kind::PowRho ? rho : rho + 2;
            int s = x < 0 ? -1 : 1;
            Wide ax = abs(x);
            Wide v = wide_pow(ax, t.beta);
            for (int j = 0; j <= order; ++j) {
                out[static_cast<size_t>(j) * N + i] = shift_factor_wide(t.beta, j, s) * v;
                v /= ax;
            }
        }
    }
}

std::vector<Wide> KernelBank::values(const Wide& rho) const
{
    std::vector<Wide> out;
    jet(rho, 0, out);
    return out;
}

KernelBank::Combination KernelBank::combine(const std::vector<Wide>& coeffs) const
{
    if (coeffs.size() != terms_.size()) throw DomainError("coefficient count does not match the bank");
    Combination c;
    c.bank_ = this;
    for (size_t gi = 0; gi < groups_.size(); ++gi) {
        const auto& g = groups_[gi];
        Combination::Group cg{gi, std::vector<Wide>(g.theta.size(), Wide(0))};
        bool any = false;
        for (size_t m = 0; m < g.members.size(); ++m) {
            const Wide& cm = coeffs[g.members[m]];
            if (cm == 0) continue;
            any = true;
            for (size_t i = 0; i < g.theta.size(); ++i) cg.weights[i] += cm * g.trig[m][i];
        }
        if (any) c.groups_.push_back(std::move(cg));
    }
    for (size_t i = 0; i < terms_.size(); ++i) {
        const auto& t = terms_[i];
        if (t.kind == Kind::Const) c.c_const_ += coeffs[i];
        if (t.kind == Kind::PowRho) {
            c.c_pow_ += coeffs[i];
            c.beta_pow_ = t.beta;
        }
        if (t.kind == Kind::PowRhoPlus2) {
            c.c_pow2_ += coeffs[i];
            c.beta_pow2_ = t.beta;
        }
    }
    return c;
}

Wide KernelBank::Combination::operator()(const Wide& rho) const
{
    Wide total = c_const_;
    std::vector<Wide> b;
    for (const auto& cg : groups_) {
        const auto& g = bank_->groups_[cg.group];
        bank_->bases(g, rho, b);
        Wide s = 0;
        for (size_t i = 0; i < b.size(); ++i) s += cg.weights[i] * wide_pow(b[i], g.beta);
        total += s;
    }
    if (c_pow_ != 0) total += c_pow_ * wide_pow(abs(rho), beta_pow_);
    if (c_pow2_ != 0) total += c_pow2_ * wide_pow(abs(rho + 2), beta_pow2_);
    return total;
}

Wide KernelBank::Combination::derivative(const Wide& rho) const
{
    Wide total = 0;
    std::vector<Wide> b;
    for (const auto& cg : groups_) {
        const auto& g = bank_->groups_[cg.group];
        int sigma = bank_->bases(g, rho, b);
        Wide s = 0;
        for (size_t i = 0; i < b.size(); ++i) s += cg.weights[i] * wide_pow(b[i], g.beta) / b[i];
        total += Wide(g.beta) * sigma * s;
    }
    if (c_pow_ != 0) {
        Wide a = abs(rho);
        total += c_pow_ * Wide(beta_pow_) * (rho < 0 ? -1 : 1) * wide_pow(a, beta_pow_) / a;
    }
    if (c_pow2_ != 0) {
        Wide a = abs(rho + 2);
        total += c_pow2_ * Wide(beta_pow2_) * (rho + 2 < 0 ? -1 : 1) * wide_pow(a, beta_pow2_) / a;
    }
    return total;
}

}  // namespace abel
