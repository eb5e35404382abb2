#include "abel/cli.hpp"

#include "abel/chebyshev.hpp"
#include "abel/config.hpp"
#include "abel/error.hpp"
#include "abel/melnikov.hpp"
#include "abel/synthesis.hpp"
#include "abel/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace abel {

namespace {

using nlohmann::json;

RealInterval parse_window(const std::string& s)
{
    auto colon = s.find(':', 1);
    if (colon == std::string::npos) throw DomainError("window must look like lo:hi, got '" + s + "'");
    try {
        RealInterval w{std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
        if (!(w.hi > w.lo)) throw DomainError("window needs lo < hi");
        return w;
    } catch (const std::logic_error&) {
        throw DomainError("window must look like lo:hi, got '" + s + "'");
    }
}

std::vector<double> uniform_grid(RealInterval w, int n)
{
    if (n < 16) throw DomainError("grid sizes must be at least 16");
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = w.lo + (w.hi - w.lo) * i / (n - 1);
    return x;
}

template <class Fn>
void parallel(size_t n, int jobs, Fn&& fn)
{
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first;
    std::mutex mu;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            try {
                for (size_t i = w; i < n; i += jobs) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first) first = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

json zeros_json(const ZeroReport& r)
{
    json z = json::array();
    for (const auto& x : r.zeros)
        z.push_back({{"location", x.location},
                     {"bracket", {x.lo, x.hi}},
                     {"derivative", x.derivative},
                     {"possibly_multiple", x.possibly_multiple}});
    return {{"count", r.count},
            {"simple_count", r.simple_count},
            {"certified", r.certified},
            {"grid", r.grid},
            {"note", r.note},
            {"zeros", z}};
}

json combination_json(const LinearCombination& lc)
{
    json terms = json::array();
    for (size_t i = 0; i < lc.size(); ++i) terms.push_back({{"term", describe(lc.terms[i])}, {"coeff", lc.coeffs[i]}});
    return terms;
}

// "-" is stdout; everything else is a file.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw DomainError("cannot open '" + path + "' for writing");
            out_ = file_.get();
        }
    }
    std::ostream& operator*() { return *out_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_;
};

void write_json(const json& j, const std::string& path, std::ostream& fallback)
{
    Sink s(path, fallback);
    *s << j.dump(2) << '\n';
}

std::string side_path(const std::string& out, const std::string& explicit_path, const std::string& suffix)
{
    if (!explicit_path.empty()) return explicit_path;
    if (out.empty() || out == "-") return "";
    return out + suffix;
}

CaseTag tag_from(const std::string& s)
{
    if (s == "lower" || s == "generic") return CaseTag::Lower;
    if (s == "upper") return CaseTag::Upper;
    if (s == "pi") return CaseTag::Pi;
    if (s == "2pi") return CaseTag::TwoPi;
    throw DomainError("case must be one of lower, upper, pi, 2pi");
}

struct Common {
    int jobs = 1;
    unsigned seed = 1;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Melnikov functions and limit cycles of piecewise smooth Abel equations"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--jobs", common.jobs, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--seed", common.seed, "random seed");

    // m1
    std::string eq_path, window_s, out_path = "-", report_path;
    int grid = 256;
    auto* m1 = app.add_subcommand("m1", "first-order Melnikov function on a grid");
    m1->add_option("--eq", eq_path, "equation JSON")->required();
    m1->add_option("--window", window_s, "lo:hi in rho");
    m1->add_option("--grid", grid, "grid points");
    m1->add_option("--out", out_path, "CSV output (- for stdout)");
    m1->add_option("--report", report_path, "zero report JSON");

    // m2
    bool structured = false, direct = false, both = false;
    auto* m2 = app.add_subcommand("m2", "second-order Melnikov function");
    m2->add_option("--eq", eq_path, "equation JSON")->required();
    m2->add_option("--window", window_s, "lo:hi in rho");
    m2->add_option("--grid", grid, "grid points");
    m2->add_option("--out", out_path, "CSV output (- for stdout)");
    m2->add_option("--report", report_path, "structured form JSON");
    auto* g = m2->add_option_group("method");
    g->add_flag("--structured", structured, "least-squares form in the structured basis");
    g->add_flag("--direct", direct, "nested quadrature");
    g->add_flag("--both", both, "both, side by side");
    g->require_option(0, 1);

    // ect
    std::string family;
    int n = 2, m = 2, n0 = 1, k0 = 2, l0 = 0, points = 400, trials = 1000;
    double vartheta_v = kPi / 2, beta = -0.5;
    std::string vartheta_s;
    auto* ect = app.add_subcommand("ect", "Wronskian and zero-bound checks for a function family");
    ect->add_option("--family", family, "cos-sin | theta-cos | theta-sin | mixed | kernel-i | kernel-ii | kernel-iii | kernel-pi")
        ->required();
    ect->add_option("--n", n);
    ect->add_option("--m", m);
    ect->add_option("--n0", n0);
    ect->add_option("--k0", k0);
    ect->add_option("--l0", l0);
    ect->add_option("--vartheta", vartheta_s, "split angle of kernel families");
    ect->add_option("--beta", beta);
    ect->add_option("--window", window_s, "rho window of kernel families");
    ect->add_option("--points", points, "Wronskian grid points");
    ect->add_option("--trials", trials, "random trials of the zero bound");
    ect->add_option("--out", out_path, "JSON output");

    // synth
    std::string case_s = "lower", theta1_s, spacing_s = "chebyshev", equation_out;
    int order = 1, p = -1, q = 2;
    double amplitude = 0.0;
    auto* synth = app.add_subcommand("synth", "realize the maximal zero counts of M1 or M2");
    synth->add_option("--m", m)->required();
    synth->add_option("--case", case_s, "lower | upper | pi | 2pi");
    synth->add_option("--theta1", theta1_s, "explicit switching angle (overrides --case)");
    synth->add_option("--order", order)->check(CLI::Range(1, 2));
    synth->add_option("--p", p);
    synth->add_option("--q", q);
    synth->add_option("--window", window_s);
    synth->add_option("--spacing", spacing_s, "chebyshev | log-chebyshev");
    synth->add_option("--out", out_path, "realization JSON");
    synth->add_option("--equation-out", equation_out, "order 1: equation JSON with this M1");
    synth->add_option("--amplitude", amplitude, "rescale coefficients to this infinity norm first");

    // validate
    double eps = 1e-3, rho = 0.0;
    std::vector<double> ladder;
    std::string samples_path;
    auto* val = app.add_subcommand("validate", "return map of the perturbed equation");
    val->add_option("--eq", eq_path, "equation JSON")->required();
    val->add_option("--eps", eps, "epsilon for the fixed-point scan");
    val->add_option("--window", window_s, "lo:hi in rho");
    val->add_option("--grid", grid, "initial scan intervals");
    val->add_option("--out", out_path, "fixed-point report JSON");
    val->add_option("--samples", samples_path, "CSV of return-map samples on the grid");
    val->add_option("--rho", rho, "with --ladder: estimate M1, M2 at this rho");
    val->add_option("--ladder", ladder, "decreasing epsilons")->expected(3, 16);

    // table
    std::string which = "Z1", parity = "even";
    bool pq_positive = false;
    auto* table = app.add_subcommand("table", "zero-count and cycle-bound tables");
    table->add_option("--which", which, "Z1 | Z2 | H")->check(CLI::IsMember({"Z1", "Z2", "H"}));
    table->add_option("--m", m)->required();
    table->add_option("--parity", parity, "parity of p for H")->check(CLI::IsMember({"even", "odd"}));
    table->add_flag("--pq-positive", pq_positive, "count the x = 0 cycle");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    }

    auto window_or = [&](RealInterval fallback) { return window_s.empty() ? fallback : parse_window(window_s); };

    try {
        if (*m1) {
            auto eq = load_equation(eq_path);
            auto lc = m1_combination(eq);
            auto w = window_or(realization_window(eq.exps.p));
            auto xs = uniform_grid(w, grid);
            std::vector<double> ys(xs.size());
            parallel(xs.size(), common.jobs, [&](size_t i) { ys[i] = eval_combination(lc, xs[i]); });
            {
                Sink s(out_path, out);
                *s << "rho,m1\n" << std::setprecision(17);
                for (size_t i = 0; i < xs.size(); ++i) *s << xs[i] << ',' << ys[i] << '\n';
            }
            ZeroOptions zo;
            zo.jobs = common.jobs;
            auto zr = count_zeros([&](double r) { return eval_combination(lc, r); }, w.lo, w.hi, zo);
            json j = zeros_json(zr);
            j["window"] = {w.lo, w.hi};
            j["case"] = case_name(eq.tag());
            j["combination"] = combination_json(lc);
            auto rp = side_path(out_path, report_path, ".zeros.json");
            write_json(j, rp, rp.empty() ? err : out);
            return 0;
        }
        if (*m2) {
            auto eq = load_equation(eq_path);
            bool want_s = structured || both || !direct;
            bool want_d = direct || both;
            auto w = window_or(default_window(positive_w_branch(eq.exps.p)));
            auto xs = uniform_grid(w, grid);
            MelnikovResult fit;
            if (want_s) {
                M2FitOptions fo;
                fo.lo = w.lo;
                fo.hi = w.hi;
                fit = m2_structured(eq, fo);
            }
            std::vector<double> ys(xs.size()), yd(xs.size());
            parallel(xs.size(), common.jobs, [&](size_t i) {
                if (want_s) ys[i] = eval_combination(fit.form, xs[i]);
                if (want_d) yd[i] = m2_direct(eq, xs[i]);
            });
            {
                Sink s(out_path, out);
                *s << "rho" << (want_s ? ",m2_structured" : "") << (want_d ? ",m2_direct" : "") << '\n'
                   << std::setprecision(17);
                for (size_t i = 0; i < xs.size(); ++i) {
                    *s << xs[i];
                    if (want_s) *s << ',' << ys[i];
                    if (want_d) *s << ',' << yd[i];
                    *s << '\n';
                }
            }
            if (want_s) {
                json j{{"case", case_name(fit.tag)},
                       {"fit_residual", fit.fit_residual},
                       {"fit_nodes", fit.nodes.size()},
                       {"window", {w.lo, w.hi}},
                       {"combination", combination_json(fit.form)}};
                auto rp = side_path(out_path, report_path, ".m2.json");
                write_json(j, rp, rp.empty() ? err : out);
            }
            return 0;
        }
        if (*ect) {
            std::unique_ptr<FunctionFamily> fam;
            bool kernel = family.rfind("kernel", 0) == 0;
            double vt = vartheta_s.empty() ? vartheta_v : parse_angle(vartheta_s);
            RealInterval w = window_or({0.05, 10.0});
            if (family == "cos-sin") fam = std::make_unique<TrigFamily>(family_cos_sin(n));
            else if (family == "theta-cos") fam = std::make_unique<TrigFamily>(family_theta_cos(n));
            else if (family == "theta-sin") fam = std::make_unique<TrigFamily>(family_theta_sin(n));
            else if (family == "mixed") fam = std::make_unique<TrigFamily>(family_mixed(n0, k0, l0));
            else if (family == "kernel-i") fam = std::make_unique<KernelFamily>(family_kernel_i(n, vt, beta), w.lo, w.hi);
            else if (family == "kernel-ii")
                fam = std::make_unique<KernelFamily>(family_kernel_ii(m, n, vt, beta), w.lo, w.hi);
            else if (family == "kernel-iii")
                fam = std::make_unique<KernelFamily>(family_kernel_iii(m, n, vt, beta), w.lo, w.hi);
            else if (family == "kernel-pi") fam = std::make_unique<KernelFamily>(family_kernel_pi(m, beta), w.lo, w.hi);
            else throw DomainError("unknown family '" + family + "'");
            GridSpec gs;
            gs.points = points;
            gs.seed = common.seed;
            if (kernel) {
                gs.lo = w.lo;
                gs.hi = w.hi;
                gs.geometric = w.lo > 0 || w.hi < -2;
                gs.anchor = w.lo > 0 ? 0.0 : -2.0;
            }
            auto rep = verify_ect(*fam, gs);
            GridSpec bg = gs;
            bg.points = 4097;
            auto bc = cheb_bound_check(*fam, trials, common.seed, 40, bg);
            json sizes = json::array();
            for (const auto& s : rep.sizes)
                sizes.push_back({{"size", s.size},
                                 {"min_abs", s.min_abs},
                                 {"max_abs", s.max_abs},
                                 {"argmin", s.argmin},
                                 {"sign", s.sign},
                                 {"sign_constant", s.sign_constant},
                                 {"discrete_min_abs", s.disc_min_abs},
                                 {"discrete_sign_constant", s.disc_sign_constant}});
            json j{{"family", fam->describe()},
                   {"ect", rep.ect},
                   {"ct", rep.ct},
                   {"resolution", rep.resolution},
                   {"wronskians", sizes},
                   {"bound_check",
                    {{"ok", bc.ok},
                     {"trials", bc.trials},
                     {"bound", bc.bound},
                     {"max_random", bc.max_random},
                     {"max_interpolated", bc.max_interpolated},
                     {"counterexample", bc.counterexample}}}};
            write_json(j, out_path, out);
            return 0;
        }
        if (*synth) {
            RealizeOptions ro;
            ro.p = p;
            ro.q = q;
            if (!window_s.empty()) {
                auto w = parse_window(window_s);
                ro.lo = w.lo;
                ro.hi = w.hi;
            }
            if (spacing_s == "log-chebyshev") ro.spacing = NodeSpacing::LogChebyshev;
            else if (spacing_s != "chebyshev") throw DomainError("spacing must be chebyshev or log-chebyshev");
            double t1 = theta1_s.empty() ? representative_theta1(tag_from(case_s)) : parse_angle(theta1_s);
            auto r = realize_table1(m, t1, order, ro);
            {
                Sink s(out_path, out);
                *s << realization_to_json_text(r) << '\n';
            }
            if (!equation_out.empty()) {
                if (order != 1) throw DomainError("only first-order realizations map back to an equation");
                std::vector<double> v;
                double mx = 0.0;
                for (const auto& c : r.coeffs) {
                    v.push_back(static_cast<double>(c));
                    mx = std::max(mx, std::fabs(v.back()));
                }
                if (amplitude > 0 && mx > 0)
                    for (auto& x : v) x *= amplitude / mx;
                auto eq = m1_to_equation(v, t1, p, q, m);
                Sink s(equation_out, out);
                *s << equation_to_json_text(eq) << '\n';
            }
            if (!r.ok()) {
                err << "realization reached " << r.achieved << " of " << r.target << " zeros\n";
                return 3;
            }
            return 0;
        }
        if (*val) {
            auto eq = load_equation(eq_path);
            if (!ladder.empty()) {
                std::optional<double> m1c;
                if (eq.exps.p != 0) m1c = eval_combination(m1_combination(eq), rho);
                auto est = melnikov_estimate(eq, rho, ladder, m1c);
                json j{{"rho", rho},
                       {"eps", est.eps},
                       {"ratio", est.ratio},
                       {"residual", est.residual},
                       {"orders", est.orders},
                       {"m1_closed", *m1c},
                       {"m1_estimate", est.m1_est},
                       {"m2_estimate", est.m2_est},
                       {"observed_order", est.observed_order},
                       {"converged", est.converged},
                       {"note", est.note}};
                write_json(j, out_path, out);
                return est.converged ? 0 : 3;
            }
            auto w = window_or(realization_window(eq.exps.p));
            auto cyc = count_limit_cycles(eq, eps, w.lo, w.hi, std::max(16, grid), common.jobs);
            auto lc = m1_combination(eq);
            ZeroOptions zo;
            zo.jobs = common.jobs;
            auto mz = count_zeros([&](double r) { return eval_combination(lc, r); }, w.lo, w.hi, zo);
            json fixed = json::array();
            for (const auto& z : cyc.zeros.zeros) {
                double best = std::numeric_limits<double>::infinity(), at = 0.0;
                for (const auto& mzz : mz.zeros)
                    if (std::fabs(mzz.location - z.location) < best) {
                        best = std::fabs(mzz.location - z.location);
                        at = mzz.location;
                    }
                json f{{"location", z.location}, {"bracket", {z.lo, z.hi}}};
                if (!mz.zeros.empty()) {
                    f["nearest_m1_zero"] = at;
                    f["distance_over_eps"] = best / eps;
                }
                fixed.push_back(f);
            }
            json j{{"epsilon", eps},
                   {"window", {w.lo, w.hi}},
                   {"fixed_points", fixed},
                   {"count", cyc.zeros.count},
                   {"certified", cyc.zeros.certified},
                   {"escaped_samples", cyc.escaped},
                   {"note", cyc.zeros.note},
                   {"m1_zeros", zeros_json(mz)}};
            write_json(j, out_path, out);
            if (!samples_path.empty()) {
                auto xs = uniform_grid(w, std::max(16, grid));
                std::vector<ReturnMapSample> samples(xs.size());
                parallel(xs.size(), common.jobs, [&](size_t i) { samples[i] = flow_map(eq, eps, xs[i]); });
                Sink s(samples_path, out);
                write_flow_csv(*s, samples);
            }
            return 0;
        }
        if (*table) {
            const CaseTag tags[] = {CaseTag::Lower, CaseTag::Pi, CaseTag::TwoPi};
            const char* labels[] = {"theta1 in (0,pi)U(pi,2pi)", "theta1 = pi", "theta1 = 2pi"};
            for (int i = 0; i < 3; ++i) {
                out << labels[i] << ": ";
                if (which == "Z1") out << table1_count(m, tags[i], 1);
                else if (which == "Z2" && tags[i] == CaseTag::Lower)
                    out << "in [" << table1_count(m, tags[i], 2) << ", " << 9 * m - 4 << "]";
                else if (which == "Z2") out << ">= " << table1_count(m, tags[i], 2);
                else {
                    auto h = hilbert_table(m, tags[i], parity == "odd", pq_positive);
                    out << ">= " << (pq_positive ? h.with_zero_cycle : h.bound) << "  (" << h.note << ")";
                }
                out << '\n';
            }
            return 0;
        }
    } catch (const ParseError& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace abel
