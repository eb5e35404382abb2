#include "abel/validate.hpp"

#include "abel/config.hpp"
#include "abel/error.hpp"
#include "abel/synthesis.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>

namespace abel {

namespace odeint = boost::numeric::odeint;

std::string status_name(FlowStatus s)
{
    switch (s) {
    case FlowStatus::Completed: return "completed";
    case FlowStatus::Escaped: return "escaped";
    case FlowStatus::StepFailure: return "step-failure";
    }
    return "?";
}

namespace {

struct Escape {};

using State = std::array<double, 1>;

// du/dtheta on one zone; zone < 0 picks the zone from theta itself.
struct Rhs {
    const AbelEquation& eq;
    double eps, rho0, one_minus_p, alpha;
    int zone;

    double poly(const PiecewiseTrigPoly& P, double t) const
    {
        if (zone < 0) return P.value(t);
        return PiecewiseTrigPoly::eval_zone(zone == 0 ? P.plus : P.minus, t);
    }

    void operator()(const State& u, State& du, double t) const
    {
        double w = one_minus_p * (rho0 + 1.0 - std::cos(t)) + u[0];
        if (!(w > 0.0)) throw Escape{};
        double a = eps * poly(eq.P1, t) + eps * eps * poly(eq.P2, t);
        double b = eps * poly(eq.Q1, t) + eps * eps * poly(eq.Q2, t);
        du[0] = one_minus_p * (a + b * std::pow(w, alpha));
    }
};

}  // namespace

ReturnMapSample flow_map(const AbelEquation& eq, double epsilon, double rho0, const FlowOptions& opt)
{
    const auto& tol = tolerances();
    double rtol = opt.rel_tol > 0 ? opt.rel_tol : tol.ode_rel;
    double atol = opt.abs_tol > 0 ? opt.abs_tol : tol.ode_abs;
    if (epsilon < 0) throw DomainError("epsilon must be non-negative");
    int p = eq.exps.p;
    if (branch_sign(rho0) != positive_w_branch(p))
        throw DomainError("rho0 must lie on the branch where (1-p) y > 0");

    // u is O(eps * coefficients), so the absolute tolerance is taken in those units
    auto maxabs = [](const PiecewiseTrigPoly& P) {
        double a = 0.0;
        for (const auto* z : {&P.plus, &P.minus})
            for (const auto& t : *z) a = std::max({a, std::fabs(t.s), std::fabs(t.c)});
        return a;
    };
    double amp = std::max({maxabs(eq.P1), eq.scale * maxabs(eq.Q1), epsilon * maxabs(eq.P2),
                           epsilon * eq.scale * maxabs(eq.Q2)});
    atol = std::max(atol * epsilon * amp, 1e-300);

    ReturnMapSample out;
    out.epsilon = epsilon;
    out.rho0 = rho0;
    double omp = 1.0 - p;
    State u{0.0};
    auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_dopri5<State>());

    std::vector<std::pair<double, double>> legs;
    std::vector<int> zones;
    if (opt.split && eq.theta1 < kTwoPi) {
        legs = {{0.0, eq.theta1}, {eq.theta1, kTwoPi}};
        zones = {0, 1};
    } else {
        legs = {{0.0, kTwoPi}};
        zones = {opt.split ? 0 : -1};
    }
    try {
        for (size_t l = 0; l < legs.size(); ++l) {
            Rhs rhs{eq, epsilon, rho0, omp, eq.alpha(), zones[l]};
            double t = legs[l].first, end = legs[l].second;
            double dt = std::min(0.05, end - t);
            while (t < end) {
                if (++out.steps > opt.max_steps) {
                    out.status = FlowStatus::StepFailure;
                    return out;
                }
                bool last = t + dt >= end;
                double h = last ? end - t : dt;
                double t_before = t;
                auto res = stepper.try_step(rhs, u, t, h);
                if (res == odeint::success) {
                    if (last) t = end;
                    dt = h;
                    if (!std::isfinite(u[0]) || std::fabs(u[0]) > opt.blowup) {
                        out.status = FlowStatus::Escaped;
                        return out;
                    }
                } else {
                    dt = h;
                    if (dt < 1e-14 * std::max(1.0, std::fabs(t_before))) {
                        out.status = FlowStatus::StepFailure;
                        return out;
                    }
                }
            }
        }
    } catch (const Escape&) {
        out.status = FlowStatus::Escaped;
        return out;
    }
    // w0(2pi) = (1-p) rho0, so the displacement in y is u / (1-p)
    out.displacement = u[0] / omp;
    out.rho_end = rho0 + out.displacement;
    return out;
}

const std::vector<double>& default_eps_ladder()
{
    static const std::vector<double> ladder{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    return ladder;
}

namespace {

// value and slope at 0 of the interpolating polynomial through (x_i, y_i)
std::pair<double, double> extrapolate(const std::vector<double>& x, const std::vector<double>& y)
{
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        double s = 1.0;
        for (int j = 0; j < n; ++j) {
            V(i, j) = s;
            s *= x[i];
        }
        b(i) = y[i];
    }
    Eigen::VectorXd c = V.colPivHouseholderQr().solve(b);
    return {c(0), n > 1 ? c(1) : 0.0};
}

}  // namespace

MelnikovEstimate melnikov_estimate(const AbelEquation& eq, double rho, const std::vector<double>& eps_list,
                                   std::optional<double> m1_closed, const FlowOptions& opt)
{
    if (eps_list.size() < 3) throw DomainError("need at least three epsilons");
    for (size_t i = 0; i < eps_list.size(); ++i)
        if (!(eps_list[i] > 0) || (i && !(eps_list[i] < eps_list[i - 1])))
            throw DomainError("epsilons must be positive and decreasing");
    MelnikovEstimate est;
    est.eps = eps_list;
    std::vector<double> disp;
    for (double e : eps_list) {
        auto s = flow_map(eq, e, rho, opt);
        if (s.status != FlowStatus::Completed)
            throw NumericalError("flow map " + status_name(s.status) + " at eps = " + std::to_string(e));
        disp.push_back(s.displacement);
        est.ratio.push_back(s.displacement / e);
    }
    auto [m1, slope] = extrapolate(est.eps, est.ratio);
    est.m1_est = m1;
    est.m2_est = slope;
    double ref = m1;
    if (m1_closed) {
        ref = *m1_closed;
        std::vector<double> q;
        for (size_t i = 0; i < disp.size(); ++i) q.push_back((disp[i] - est.eps[i] * ref) / (est.eps[i] * est.eps[i]));
        est.m2_est = extrapolate(est.eps, q).first;
    }
    for (double r : est.ratio) est.residual.push_back(std::fabs(r - ref));
    double sum = 0.0;
    for (size_t i = 0; i + 1 < est.residual.size(); ++i) {
        double o = std::log(est.residual[i] / est.residual[i + 1]) / std::log(est.eps[i] / est.eps[i + 1]);
        est.orders.push_back(o);
        sum += o;
    }
    est.observed_order = sum / est.orders.size();
    est.converged = std::isfinite(est.observed_order) && std::fabs(est.observed_order - 1.0) <= 0.3;
    for (double o : est.orders)
        if (!std::isfinite(o) || std::fabs(o - 1.0) > 0.3) est.converged = false;
    if (!est.converged) est.note = "residual does not shrink linearly in eps";
    return est;
}

CycleReport count_limit_cycles(const AbelEquation& eq, double epsilon, double lo, double hi, int grid, int jobs,
                               const FlowOptions& opt)
{
    if (grid < 16) throw DomainError("grid must have at least 16 intervals");
    int br = positive_w_branch(eq.exps.p);
    if (branch_sign(lo) != br || branch_sign(hi) != br)
        throw DomainError("window must lie on the branch where (1-p) y > 0");
    std::atomic<int> escaped{0};
    auto f = [&](double rho) {
        auto s = flow_map(eq, epsilon, rho, opt);
        if (s.status != FlowStatus::Completed) {
            ++escaped;
            return std::numeric_limits<double>::quiet_NaN();
        }
        return s.displacement;
    };
    ZeroOptions zo;
    zo.initial = grid;
    zo.jobs = jobs;
    CycleReport rep;
    rep.zeros = count_zeros(f, lo, hi, zo);
    rep.escaped = escaped.load();
    if (rep.escaped) {
        if (!rep.zeros.note.empty()) rep.zeros.note += "; ";
        rep.zeros.note += std::to_string(rep.escaped) + " samples escaped and were skipped";
    }
    return rep;
}

HilbertEntry hilbert_table(int m, CaseTag tag, bool p_odd, bool p_q_positive)
{
    if (m < 1) throw DomainError("m must be at least 1");
    HilbertEntry h;
    int z2 = table1_count(m, tag, 2);
    h.bound = p_odd ? 2 * z2 : z2;
    h.with_zero_cycle = h.bound + (p_q_positive ? 1 : 0);
    h.note = std::to_string(z2) + " zeros of M2 in the reduced variable";
    h.note += p_odd ? ", doubled: x -> x^(1-p) is two-to-one for odd p" : ", same count: one-to-one for even p";
    if (p_q_positive) h.note += "; x = 0 adds one more cycle when p, q > 0";
    return h;
}

void write_flow_csv(std::ostream& os, const std::vector<ReturnMapSample>& samples)
{
    os << "epsilon,rho0,rho_end,displacement,status\n";
    os << std::setprecision(17);
    for (const auto& s : samples)
        os << s.epsilon << ',' << s.rho0 << ',' << s.rho_end << ',' << s.displacement << ',' << status_name(s.status)
           << '\n';
}

}  // namespace abel
