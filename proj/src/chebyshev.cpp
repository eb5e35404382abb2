#include "abel/chebyshev.hpp"

#include "abel/config.hpp"
#include "abel/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace abel {

std::vector<Wide> FunctionFamily::values(const Wide& t) const
{
    std::vector<Wide> out;
    jet(t, 0, out);
    return out;
}

std::string FunctionFamily::describe() const
{
    std::string s = "(";
    for (size_t i = 0; i < size(); ++i) s += (i ? ", " : "") + name(i);
    return s + ")";
}

TrigFamily::TrigFamily(std::vector<TrigMember> members, RealInterval iv) : members_(std::move(members)), iv_(iv) {}

namespace {

// j-th derivative of cos(k t) (is_cos) or sin(k t) from their values.
Wide trig_derivative(bool is_cos, int k, int j, const Wide& c, const Wide& s)
{
    if (j < 0) return 0;
    Wide kj = 1;
    for (int i = 0; i < j; ++i) kj *= k;
    int r = j % 4;
    if (is_cos) {
        switch (r) {
        case 0: return kj * c;
        case 1: return -kj * s;
        case 2: return -kj * c;
        default: return kj * s;
        }
    }
    switch (r) {
    case 0: return kj * s;
    case 1: return kj * c;
    case 2: return -kj * s;
    default: return -kj * c;
    }
}

}  // namespace

void TrigFamily::jet(const Wide& t, int order, std::vector<Wide>& out) const
{
    const size_t N = members_.size();
    out.assign(static_cast<size_t>(order + 1) * N, Wide(0));
    for (size_t i = 0; i < N; ++i) {
        const auto& mb = members_[i];
        Wide kt = Wide(mb.k) * t;
        Wide c = cos(kt), s = sin(kt);
        for (int j = 0; j <= order; ++j) {
            Wide v = 0;
            switch (mb.type) {
            case TrigMember::One: v = j == 0 ? 1 : 0; break;
            case TrigMember::Theta: v = j == 0 ? t : (j == 1 ? Wide(1) : Wide(0)); break;
            case TrigMember::Cos: v = trig_derivative(true, mb.k, j, c, s); break;
            case TrigMember::Sin: v = trig_derivative(false, mb.k, j, c, s); break;
            case TrigMember::ThetaCos:
                v = t * trig_derivative(true, mb.k, j, c, s) + Wide(j) * trig_derivative(true, mb.k, j - 1, c, s);
                break;
            case TrigMember::ThetaSin:
                v = t * trig_derivative(false, mb.k, j, c, s) + Wide(j) * trig_derivative(false, mb.k, j - 1, c, s);
                break;
            }
            out[static_cast<size_t>(j) * N + i] = v;
        }
    }
}

std::string TrigFamily::name(size_t i) const
{
    const auto& m = members_[i];
    std::string k = std::to_string(m.k);
    switch (m.type) {
    case TrigMember::One: return "1";
    case TrigMember::Theta: return "t";
    case TrigMember::Cos: return "c" + k;
    case TrigMember::Sin: return "s" + k;
    case TrigMember::ThetaCos: return "t*c" + k;
    case TrigMember::ThetaSin: return "t*s" + k;
    }
    return "?";
}

KernelFamily::KernelFamily(std::vector<BasisTerm> terms, double lo, double hi) : bank_(std::move(terms), lo, hi) {}

void KernelFamily::jet(const Wide& t, int order, std::vector<Wide>& out) const
{
    bank_.jet(t, order, out);
}

AdaptiveKernelFamily::AdaptiveKernelFamily(std::vector<BasisTerm> terms, double lo, double hi)
    : terms_(std::move(terms)), lo_(lo), hi_(hi)
{
}

int AdaptiveKernelFamily::max_order() const
{
    return tolerances().max_drho_order;
}

void AdaptiveKernelFamily::jet(const Wide& t, int order, std::vector<Wide>& out) const
{
    const size_t N = terms_.size();
    out.assign(static_cast<size_t>(order + 1) * N, Wide(0));
    double rho = static_cast<double>(t);
    QuadOptions opt{1e-300, 1e-13, 1 << 14};
    for (int j = 0; j <= order; ++j)
        for (size_t i = 0; i < N; ++i) out[static_cast<size_t>(j) * N + i] = eval_basis_drho(terms_[i], rho, j, opt);
}

std::vector<TrigMember> family_cos_sin(int n)
{
    std::vector<TrigMember> f{{TrigMember::One, 0}};
    for (int k = 1; k <= n; ++k) f.push_back({TrigMember::Cos, k});
    for (int k = n; k >= 1; --k) f.push_back({TrigMember::Sin, k});
    return f;
}

std::vector<TrigMember> family_theta_cos(int n)
{
    std::vector<TrigMember> f{{TrigMember::One, 0}, {TrigMember::Theta, 0}};
    for (int k = 1; k <= n; ++k) {
        f.push_back({TrigMember::Sin, k});
        f.push_back({TrigMember::Cos, k});
        f.push_back({TrigMember::ThetaCos, k});
    }
    return f;
}

std::vector<TrigMember> family_theta_sin(int n)
{
    std::vector<TrigMember> f{{TrigMember::One, 0}};
    for (int k = 1; k <= n; ++k) {
        f.push_back({TrigMember::Cos, k});
        f.push_back({TrigMember::Sin, k});
        f.push_back({TrigMember::ThetaSin, k});
    }
    return f;
}

std::vector<TrigMember> family_mixed(int n0, int k0, int l0)
{
    if (!(k0 > n0 && n0 >= 1 && k0 > l0 && l0 >= 0)) throw DomainError("need k0 > n0 >= 1 and k0 > l0 >= 0");
    auto f = family_theta_sin(n0);
    for (int k = n0 + 1; k <= k0; ++k) f.push_back({TrigMember::Cos, k});
    // s_1..s_{n0} already sit in the leading block
    for (int k = k0; k >= std::max(l0, n0) + 1; --k) f.push_back({TrigMember::Sin, k});
    return f;
}

namespace {

// J1 members dropped when vartheta = 0, J2 members when vartheta = pi.
struct Halves {
    Segment J1, J2;
    bool use1, use2;
};

Halves halves(double vartheta)
{
    if (vartheta < 0.0 || vartheta > kPi + 1e-12) throw DomainError("vartheta must lie in [0, pi]");
    return {{0.0, vartheta}, {vartheta, kPi}, vartheta > 1e-12, vartheta < kPi - 1e-12};
}

// C0, C1, S1, D1, ..., C_{m-1}, S_{m-1}, D_{m-1} on J
void push_csd_block(std::vector<BasisTerm>& f, int m, Segment J, double beta)
{
    f.push_back(term_C(0, J, beta));
    for (int k = 1; k <= m - 1; ++k) {
        f.push_back(term_C(k, J, beta));
        f.push_back(term_S(k, J, beta));
        f.push_back(term_D(k, J, beta));
    }
}

}  // namespace

std::vector<BasisTerm> family_kernel_i(int n, double vartheta, double beta)
{
    auto h = halves(vartheta);
    std::vector<BasisTerm> f;
    if (h.use1) {
        for (int k = 0; k <= n; ++k) f.push_back(term_C(k, h.J1, beta));
        for (int k = n; k >= 1; --k) f.push_back(term_S(k, h.J1, beta));
    }
    if (h.use2)
        for (int k = 0; k <= n; ++k) f.push_back(term_C(k, h.J2, beta));
    return f;
}

std::vector<BasisTerm> family_kernel_ii(int m, int n, double vartheta, double beta)
{
    if (!(n > m && m >= 1)) throw DomainError("need n > m >= 1");
    auto h = halves(vartheta);
    std::vector<BasisTerm> f;
    if (h.use1) {
        push_csd_block(f, m, h.J1, beta);
        for (int k = m; k <= n; ++k) f.push_back(term_C(k, h.J1, beta));
        for (int k = n; k >= m; --k) f.push_back(term_S(k, h.J1, beta));
    }
    if (h.use2)
        for (int k = 0; k <= n; ++k) f.push_back(term_C(k, h.J2, beta));
    return f;
}

std::vector<BasisTerm> family_kernel_iii(int m, int n, double vartheta, double beta)
{
    if (!(n > m && m >= 1)) throw DomainError("need n > m >= 1");
    auto h = halves(vartheta);
    std::vector<BasisTerm> f;
    if (h.use1) {
        push_csd_block(f, m, h.J1, beta);
        for (int k = m; k <= n; ++k) f.push_back(term_C(k, h.J1, beta));
        for (int k = n; k >= m; --k) f.push_back(term_S(k, h.J1, beta));
    }
    if (h.use2) {
        push_csd_block(f, m, h.J2, beta);
        for (int k = m; k <= n; ++k) f.push_back(term_C(k, h.J2, beta));
    }
    return f;
}

std::vector<BasisTerm> family_kernel_pi(int m, double beta)
{
    Segment E{0.0, kPi};
    std::vector<BasisTerm> f{term_const(), term_pow_rho(beta), term_pow_rho_plus2(beta)};
    for (int k = 0; k <= 2 * m - 1; ++k) f.push_back(term_C(k, E, beta));
    for (int k = 2 * m - 1; k >= 1; --k) f.push_back(term_S(k, E, beta));
    return f;
}

Wide continuous_wronskian(const FunctionFamily& f, const Wide& t, int size)
{
    if (size < 1 || size > static_cast<int>(f.size())) throw DomainError("Wronskian size out of range");
    if (size - 1 > f.max_order()) throw DomainError("family does not provide enough derivatives");
    std::vector<Wide> jet;
    f.jet(t, size - 1, jet);
    WideMatrix M(size);
    for (int j = 0; j < size; ++j)
        for (int i = 0; i < size; ++i) M(j, i) = jet[static_cast<size_t>(j) * f.size() + i];
    return determinant(M);
}

Wide discrete_wronskian(const FunctionFamily& f, const std::vector<Wide>& nodes)
{
    const int k = static_cast<int>(nodes.size());
    if (k < 1 || k > static_cast<int>(f.size())) throw DomainError("node count out of range");
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (nodes[a] == nodes[b]) throw DomainError("discrete Wronskian needs distinct nodes");
    WideMatrix M(k);
    for (int a = 0; a < k; ++a) {
        auto v = f.values(nodes[a]);
        for (int i = 0; i < k; ++i) M(a, i) = v[i];
    }
    return determinant(M);
}

std::vector<double> make_grid(const GridSpec& g, RealInterval fallback)
{
    double lo = g.lo, hi = g.hi;
    if (lo == 0.0 && hi == 0.0) {
        // open interval: stay half a cell away from the ends
        double h = (fallback.hi - fallback.lo) / g.points;
        lo = fallback.lo + 0.5 * h;
        hi = fallback.hi - 0.5 * h;
    }
    std::vector<double> x(g.points);
    if (g.points == 1) {
        x[0] = 0.5 * (lo + hi);
        return x;
    }
    if (g.geometric) {
        double s = lo > g.anchor ? 1.0 : -1.0;
        double a = std::log(std::fabs(lo - g.anchor)), b = std::log(std::fabs(hi - g.anchor));
        for (int i = 0; i < g.points; ++i) x[i] = g.anchor + s * std::exp(a + (b - a) * i / (g.points - 1));
        std::sort(x.begin(), x.end());
        return x;
    }
    for (int i = 0; i < g.points; ++i) x[i] = lo + (hi - lo) * i / (g.points - 1);
    return x;
}

namespace {

int sgn(const Wide& w) { return w > 0 ? 1 : (w < 0 ? -1 : 0); }

template <class Fn>
void parallel_for(size_t n, int jobs, Fn&& fn)
{
    if (jobs <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (size_t i = w; i < n; i += jobs) fn(i);
        });
    for (auto& t : pool) t.join();
}

int default_jobs()
{
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, std::min(env_int("ABEL_JOBS", hw), 64));
}

}  // namespace

WronskianReport verify_ect(const FunctionFamily& f, const GridSpec& grid)
{
    const int N = static_cast<int>(f.size());
    auto xs = make_grid(grid, f.interval());
    const int P = static_cast<int>(xs.size());
    std::vector<std::vector<Wide>> W(P, std::vector<Wide>(N));
    std::vector<std::vector<Wide>> vals(P);
    parallel_for(P, default_jobs(), [&](size_t p) {
        std::vector<Wide> jet;
        f.jet(Wide(xs[p]), N - 1, jet);
        vals[p].assign(jet.begin(), jet.begin() + N);
        for (int k = 1; k <= N; ++k) {
            WideMatrix M(k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < k; ++i) M(j, i) = jet[static_cast<size_t>(j) * N + i];
            W[p][k - 1] = determinant(M);
        }
    });
    WronskianReport rep;
    rep.points = P;
    std::ostringstream res;
    res << P << " grid points on [" << xs.front() << ", " << xs.back() << "], " << grid.tuples
        << " ordered tuples per size";
    rep.resolution = res.str();
    std::mt19937 rng(grid.seed);
    for (int k = 1; k <= N; ++k) {
        SubfamilyStats st;
        st.size = k;
        st.sign = sgn(W[0][k - 1]);
        Wide mn = abs(W[0][k - 1]), mx = mn;
        st.argmin = xs[0];
        for (int p = 0; p < P; ++p) {
            const Wide& w = W[p][k - 1];
            if (sgn(w) != st.sign || st.sign == 0) st.sign_constant = false;
            if (abs(w) < mn) {
                mn = abs(w);
                st.argmin = xs[p];
            }
            mx = std::max(mx, Wide(abs(w)));
        }
        st.min_abs = static_cast<double>(mn);
        st.max_abs = static_cast<double>(mx);
        // discrete Wronskians on random ordered subsets of the grid
        int dsign = 0;
        Wide dmin = -1;
        if (P >= k) {
            std::vector<int> idx(P);
            for (int i = 0; i < P; ++i) idx[i] = i;
            for (int t = 0; t < grid.tuples; ++t) {
                std::shuffle(idx.begin(), idx.end(), rng);
                std::vector<int> pick(idx.begin(), idx.begin() + k);
                std::sort(pick.begin(), pick.end());
                WideMatrix M(k);
                for (int a = 0; a < k; ++a)
                    for (int i = 0; i < k; ++i) M(a, i) = vals[pick[a]][i];
                Wide d = determinant(M);
                int s = sgn(d);
                if (t == 0) dsign = s;
                if (s != dsign || s == 0) st.disc_sign_constant = false;
                if (dmin < 0 || abs(d) < dmin) dmin = abs(d);
            }
        }
        st.disc_min_abs = dmin < 0 ? 0.0 : static_cast<double>(dmin);
        if (!st.sign_constant || st.min_abs == 0.0) rep.ect = false;
        if (!st.disc_sign_constant) rep.ct = false;
        rep.sizes.push_back(st);
    }
    return rep;
}

namespace {

double grid_point(double lo, double hi, int i, int n, const ZeroOptions& opt)
{
    if (i == 0) return lo;
    if (i == n) return hi;
    if (!opt.geometric) return lo + (hi - lo) * static_cast<double>(i) / n;
    double s = lo > opt.anchor ? 1.0 : -1.0;
    double a = std::log(std::fabs(lo - opt.anchor)), b = std::log(std::fabs(hi - opt.anchor));
    return opt.anchor + s * std::exp(a + (b - a) * static_cast<double>(i) / n);
}

struct Scan {
    int count = 0;
    std::vector<std::pair<int, int>> brackets;  // grid indices
};

Scan scan(const std::vector<double>& v, int stride, double tol)
{
    Scan s;
    int last = -1, last_sign = 0;
    for (size_t i = 0; i < v.size(); i += stride) {
        int sg = v[i] > tol ? 1 : (v[i] < -tol ? -1 : 0);
        if (sg == 0) continue;
        if (last_sign != 0 && sg != last_sign) {
            ++s.count;
            s.brackets.emplace_back(last, static_cast<int>(i));
        }
        last = static_cast<int>(i);
        last_sign = sg;
    }
    return s;
}

}  // namespace

ZeroReport count_zeros(const std::function<double(double)>& f, double lo, double hi, const ZeroOptions& opt)
{
    const auto& tol = tolerances();
    double width = opt.bracket_width > 0 ? opt.bracket_width : tol.bracket_width;
    double stol = opt.sign_tol >= 0 ? opt.sign_tol : tol.sign_tol;
    double mtol = opt.multiple_tol >= 0 ? opt.multiple_tol : tol.multiple_root;
    if (!(hi > lo)) throw DomainError("count_zeros needs lo < hi");
    if (opt.geometric && (opt.anchor - lo) * (opt.anchor - hi) <= 0)
        throw DomainError("geometric grid anchor must lie outside [lo, hi]");

    ZeroReport rep;
    // values on the finest grid evaluated so far, nested by doubling
    int n = std::max(16, opt.initial);
    int maxn = std::max(n, opt.max_grid);
    int finest = n;
    std::vector<double> vals(static_cast<size_t>(n) + 1);
    parallel_for(static_cast<size_t>(n) + 1, opt.jobs, [&](size_t i) {
        vals[i] = f(grid_point(lo, hi, static_cast<int>(i), n, opt));
    });
    std::vector<int> history;
    auto count_at = [&](int stride) {
        double fs = 0.0;
        for (size_t i = 0; i < vals.size(); i += stride) fs = std::max(fs, std::fabs(vals[i]));
        return scan(vals, stride, stol * fs);
    };
    history.push_back(count_at(1).count);
    while (true) {
        bool stable = history.size() >= 3 && history[history.size() - 1] == history[history.size() - 2] &&
                      history[history.size() - 2] == history[history.size() - 3];
        if (stable) {
            rep.certified = true;
            break;
        }
        if (finest * 2 > maxn) break;
        int m = finest * 2;
        std::vector<double> next(static_cast<size_t>(m) + 1);
        for (int i = 0; i <= finest; ++i) next[2 * i] = vals[i];
        parallel_for(static_cast<size_t>(finest), opt.jobs, [&](size_t j) {
            int i = 2 * static_cast<int>(j) + 1;
            next[i] = f(grid_point(lo, hi, i, m, opt));
        });
        vals.swap(next);
        finest = m;
        history.push_back(count_at(1).count);
    }
    rep.grid = finest;
    double fscale = 0.0;
    for (double v : vals) fscale = std::max(fscale, std::fabs(v));
    Scan s = scan(vals, 1, stol * fscale);
    if (!rep.certified) rep.note = "zero count did not stabilize up to " + std::to_string(finest) + " intervals";
    for (auto [ia, ib] : s.brackets) {
        double a = grid_point(lo, hi, ia, finest, opt), b = grid_point(lo, hi, ib, finest, opt);
        double fa = vals[ia];
        Zero z;
        z.sign_left = fa > 0 ? 1 : -1;
        while (b - a > width) {
            double mid = 0.5 * (a + b);
            if (!(mid > a && mid < b)) break;
            double fm = f(mid);
            if (fm == 0.0) {
                a = b = mid;
                break;
            }
            if ((fm > 0) == (fa > 0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        z.lo = a;
        z.hi = b;
        z.location = 0.5 * (a + b);
        double h = std::max(1e-7 * (hi - lo), 1e3 * width);
        double r = z.location;
        double left = std::max(lo, r - h), right = std::min(hi, r + h);
        z.derivative = (f(right) - f(left)) / (right - left);
        z.possibly_multiple = fscale > 0 && std::fabs(z.derivative) * (hi - lo) / fscale < mtol;
        rep.zeros.push_back(z);
    }
    rep.count = static_cast<int>(rep.zeros.size());
    rep.simple_count = 0;
    for (const auto& z : rep.zeros)
        if (!z.possibly_multiple) ++rep.simple_count;
    return rep;
}

BoundCheck cheb_bound_check(const FunctionFamily& f, int trials, unsigned seed, int interpolating,
                            const GridSpec& grid_in)
{
    const int N = static_cast<int>(f.size());
    GridSpec grid = grid_in;
    if (grid.points == GridSpec{}.points) grid.points = 4097;
    auto xs = make_grid(grid, f.interval());
    const int P = static_cast<int>(xs.size());
    std::vector<std::vector<Wide>> table(P);
    parallel_for(P, default_jobs(), [&](size_t p) { table[p] = f.values(Wide(xs[p])); });
    std::vector<double> dtable(static_cast<size_t>(P) * N);
    for (int p = 0; p < P; ++p)
        for (int i = 0; i < N; ++i) dtable[static_cast<size_t>(p) * N + i] = static_cast<double>(table[p][i]);

    BoundCheck out;
    out.bound = N - 1;
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    const double stol = tolerances().sign_tol;
    std::vector<double> v(P);
    auto count = [&](const std::vector<double>& vals) {
        double fs = 0.0;
        for (double x : vals) fs = std::max(fs, std::fabs(x));
        return scan(vals, 1, stol * fs).count;
    };
    for (int t = 0; t < trials; ++t) {
        std::vector<double> c(N);
        double norm = 0.0;
        for (auto& x : c) {
            x = g(rng);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto& x : c) x /= norm;
        for (int p = 0; p < P; ++p) {
            double s = 0.0;
            for (int i = 0; i < N; ++i) s += c[i] * dtable[static_cast<size_t>(p) * N + i];
            v[p] = s;
        }
        int z = count(v);
        out.max_random = std::max(out.max_random, z);
        ++out.trials;
        if (z > N - 1 && out.ok) {
            out.ok = false;
            out.counterexample = c;
        }
    }
    // combinations forced through N-1 random nodes attain the bound
    if (N >= 2 && P > 16 * N) {
        std::vector<int> idx;
        for (int i = 4; i < P - 4; i += 8) idx.push_back(i);
        for (int t = 0; t < interpolating && static_cast<int>(idx.size()) >= N - 1; ++t) {
            std::shuffle(idx.begin(), idx.end(), rng);
            std::vector<int> pick(idx.begin(), idx.begin() + (N - 1));
            std::sort(pick.begin(), pick.end());
            WideMatrix M(N);
            std::vector<Wide> rhs(N, Wide(0));
            for (int a = 0; a < N - 1; ++a) {
                // node halfway between grid points so it never sits on the grid
                Wide x = (Wide(xs[pick[a]]) + Wide(xs[pick[a] + 1])) / 2;
                auto vals = f.values(x);
                for (int i = 0; i < N; ++i) M(a, i) = vals[i];
            }
            M(N - 1, N - 1) = 1;
            rhs[N - 1] = 1;
            std::vector<Wide> c;
            try {
                c = solve(M, rhs);
            } catch (const NumericalError&) {
                continue;
            }
            // signs taken in quad precision: these combinations span many decades
            std::vector<Wide> wv(P);
            Wide fs = 0;
            for (int p = 0; p < P; ++p) {
                Wide s = 0;
                for (int i = 0; i < N; ++i) s += c[i] * table[p][i];
                wv[p] = s;
                fs = std::max(fs, Wide(abs(s)));
            }
            Wide wtol = fs * Wide(1e-28);
            int z = 0, last = 0;
            for (int p = 0; p < P; ++p) {
                int sg = wv[p] > wtol ? 1 : (wv[p] < -wtol ? -1 : 0);
                if (sg == 0) continue;
                if (last != 0 && sg != last) ++z;
                last = sg;
            }
            out.max_interpolated = std::max(out.max_interpolated, z);
            ++out.trials;
            if (z > N - 1 && out.ok) {
                out.ok = false;
                out.counterexample.clear();
                for (auto& x : c) out.counterexample.push_back(static_cast<double>(x));
            }
        }
    }
    return out;
}

}  // namespace abel
