#include "abel/error.hpp"
#include "abel/melnikov.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace abel;

namespace {

template <class F>
double simpson(F f, double a, double b, int n = 4000)
{
    if (!(b > a)) return 0.0;
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// First-order displacement coefficient straight from its defining integral.
double m1_oracle(const AbelEquation& eq, double rho)
{
    auto f = [&](double t) {
        return eq.scale * eq.Q1.value(t) * std::pow(std::fabs(1.0 + rho - std::cos(t)), eq.alpha());
    };
    double t1 = eq.theta1;
    // zone-exact: integrate each zone with its own polynomial
    auto fp = [&](double t) {
        return eq.scale * PiecewiseTrigPoly::eval_zone(eq.Q1.plus, t) *
               std::pow(std::fabs(1.0 + rho - std::cos(t)), eq.alpha());
    };
    auto fm = [&](double t) {
        return eq.scale * PiecewiseTrigPoly::eval_zone(eq.Q1.minus, t) *
               std::pow(std::fabs(1.0 + rho - std::cos(t)), eq.alpha());
    };
    (void)f;
    return eq.p10 + simpson(fp, 0.0, t1) + simpson(fm, t1, kTwoPi);
}

PiecewiseTrigPoly random_poly(int m, double theta1, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto p = PiecewiseTrigPoly::zero(m, theta1);
    for (int k = 0; k <= m; ++k) {
        p.plus[k] = {k ? u(rng) : 0.0, u(rng)};
        p.minus[k] = {k ? u(rng) : 0.0, u(rng)};
    }
    if (theta1 >= kTwoPi) p.minus = p.plus;
    return p;
}

// Equation with M1 = 0 built directly from the center conditions.
AbelEquation center_equation(int p, int q, int m, double theta1, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool at_pi = std::fabs(theta1 - kPi) < 1e-12;
    auto P1 = random_poly(m, theta1, rng);
    if (at_pi)
        for (int k = 1; k <= m; ++k) P1.minus[k].s = P1.plus[k].s;
    double shift = -P1.total() / kTwoPi;
    P1.plus[0].c += shift;
    P1.minus[0].c += shift;
    auto Q1 = PiecewiseTrigPoly::zero(m, theta1);
    for (int k = 1; k <= m; ++k) Q1.plus[k].s = Q1.minus[k].s = u(rng);
    if (at_pi)
        for (int k = 0; k <= m; ++k) {
            Q1.plus[k].c = u(rng);
            Q1.minus[k].c = -Q1.plus[k].c;
        }
    return make_equation(p, q, m, theta1, P1, random_poly(m, theta1, rng), Q1, random_poly(m, theta1, rng));
}

}  // namespace

TEST_CASE("first-order closed form, smooth case")
{
    auto Q1 = PiecewiseTrigPoly::zero(1, kTwoPi);
    Q1.plus[1].c = 1.0;
    Q1.minus.clear();
    auto eq = make_equation(-1, 2, 1, kTwoPi, {}, {}, Q1, {});
    auto lc = m1_combination(eq);
    REQUIRE(lc.size() == 1);
    CHECK(lc.terms[0] == term_C(1, {0.0, kPi}, 1.5));
    CHECK(lc.coeffs[0] == doctest::Approx(2.0 * std::pow(2.0, 1.5)));
}

TEST_CASE("constant first-order function")
{
    auto P1 = PiecewiseTrigPoly::zero(0, kTwoPi);
    P1.plus[0].c = P1.minus[0].c = 3.0 / kTwoPi;
    auto eq = make_equation(-1, 2, 0, kTwoPi, P1, {}, {}, {});
    auto lc = m1_combination(eq);
    REQUIRE(lc.size() == 1);
    CHECK(lc.terms[0].kind == Kind::Const);
    CHECK(lc.coeffs[0] == doctest::Approx(3.0));
    CHECK(eval_combination(LinearCombination{}, 1.0) == 0.0);
}

TEST_CASE("generic first-order basis at theta1 = pi/2")
{
    std::mt19937 rng(2);
    auto eq = make_equation(-1, 2, 1, kPi / 2, random_poly(1, kPi / 2, rng), {}, random_poly(1, kPi / 2, rng), {});
    auto lc = m1_combination(eq);
    REQUIRE(lc.size() == 6);
    Segment E1{0, kPi / 2}, E2{kPi / 2, kPi};
    std::vector<BasisTerm> expect = {term_const(),         term_C(0, E1, 1.5), term_C(1, E1, 1.5),
                                     term_S(1, E1, 1.5),   term_C(0, E2, 1.5), term_C(1, E2, 1.5)};
    for (size_t i = 0; i < 6; ++i) CHECK(lc.terms[i] == expect[i]);
}

TEST_CASE("closed form matches the defining integral in every case")
{
    std::mt19937 rng(21);
    for (double t1 : {kPi / 3, kPi / 2, 2 * kPi / 3, kPi, 5 * kPi / 4, 7 * kPi / 4, kTwoPi}) {
        for (auto [p, q, rho] : {std::tuple{-1, 2, 0.7}, std::tuple{3, 2, -3.1}, std::tuple{2, 4, 1.9}}) {
            auto eq = make_equation(p, q, 2, t1, random_poly(2, t1, rng), {}, random_poly(2, t1, rng), {});
            double v = eval_combination(m1_combination(eq), rho);
            double ref = m1_oracle(eq, rho);
            CHECK(std::fabs(v - ref) <= 1e-9 * std::max(1.0, std::fabs(ref)));
        }
    }
}

TEST_CASE("first-order function is linear in Q1 and affine in p10")
{
    std::mt19937 rng(8);
    double t1 = 5 * kPi / 4;
    auto Qa = random_poly(2, t1, rng), Qb = random_poly(2, t1, rng), Qs = Qa;
    for (int k = 0; k <= 2; ++k) {
        Qs.plus[k].s = 2 * Qa.plus[k].s - 3 * Qb.plus[k].s;
        Qs.plus[k].c = 2 * Qa.plus[k].c - 3 * Qb.plus[k].c;
        Qs.minus[k].s = 2 * Qa.minus[k].s - 3 * Qb.minus[k].s;
        Qs.minus[k].c = 2 * Qa.minus[k].c - 3 * Qb.minus[k].c;
    }
    auto P = random_poly(2, t1, rng);
    auto ea = make_equation(-1, 2, 2, t1, {}, {}, Qa, {});
    auto eb = make_equation(-1, 2, 2, t1, {}, {}, Qb, {});
    auto es = make_equation(-1, 2, 2, t1, P, {}, Qs, {});
    for (double rho : {0.4, 2.2}) {
        double lhs = eval_combination(m1_combination(es), rho);
        double rhs = es.p10 + 2 * eval_combination(m1_combination(ea), rho) -
                     3 * eval_combination(m1_combination(eb), rho);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("s1_hat")
{
    std::mt19937 rng(4);
    auto eq = make_equation(-1, 2, 1, kPi / 2, random_poly(1, kPi / 2, rng), {}, random_poly(1, kPi / 2, rng), {});
    CHECK(s1_hat(eq, 0.0, 1.0) == 0.0);
    auto zero = make_equation(-1, 2, 1, kPi / 2, {}, {}, {}, {});
    CHECK(s1_hat(zero, 2.0, 1.0) == 0.0);
    auto P1 = PiecewiseTrigPoly::zero(1, kTwoPi);
    P1.plus[1].c = P1.minus[1].c = 1.0;
    auto cosine = make_equation(-1, 2, 1, kTwoPi, P1, {}, {}, {});
    for (double th : {0.3, 1.0, 2.5, 4.0, 6.0}) CHECK(s1_hat(cosine, th, 0.8) == doctest::Approx(std::sin(th)));
}

TEST_CASE("second order with only Q2 reduces to a first-order form")
{
    auto Q2 = PiecewiseTrigPoly::zero(1, kTwoPi);
    Q2.plus[1].c = Q2.minus[1].c = 1.0;
    auto eq = make_equation(-1, 2, 1, kTwoPi, {}, {}, {}, Q2);
    auto as_first = make_equation(-1, 2, 1, kTwoPi, {}, {}, Q2, {});
    for (double rho : {0.5, 3.0})
        CHECK(m2_direct(eq, rho) == doctest::Approx(eval_combination(m1_combination(as_first), rho)).epsilon(1e-10));
}

TEST_CASE("center equations: odd part cancels and the by-parts form agrees")
{
    unsigned seed = 100;
    for (double t1 : {kPi / 2, 5 * kPi / 4, kTwoPi}) {
        for (auto [p, q, rho] : {std::tuple{-1, 2, 1.3}, std::tuple{3, 2, -4.0}}) {
            auto eq = center_equation(p, q, 2, t1, seed++);
            REQUIRE(center_conditions(eq).holds);
            auto parts = m2_parts(eq, rho);
            CHECK(std::fabs(parts.double_integral) < 1e-9);
            double direct = parts.total();
            CHECK(std::fabs(m2_by_parts(eq, rho) - direct) <= 1e-6 * std::max(1.0, std::fabs(direct)));
        }
    }
}

TEST_CASE("m2_integrand limits and preconditions")
{
    auto eq = center_equation(-1, 2, 2, kPi / 2, 7);
    // R / sin vanishes at 0 because int_0^0 P1 = 0, so m2(0) = Q2~(0) - P1(0) * sum c~_k k
    double sum = 0.0;
    for (int k = 1; k <= 2; ++k) sum += eq.c_tilde(1, k, true) * k;
    CHECK(m2_integrand(eq, 0.0) == doctest::Approx(eq.q_tilde(2, 0.0) - eq.P1.value(0.0) * sum));
    auto q_only = make_equation(-1, 2, 1, kPi / 2, {}, {}, {}, [] {
        auto Q2 = PiecewiseTrigPoly::zero(1, kPi / 2);
        Q2.plus[1].s = 0.5;
        Q2.minus[0].c = -2.0;
        return Q2;
    }());
    for (double th : {0.2, 1.0, 3.0, 5.5}) CHECK(m2_integrand(q_only, th) == doctest::Approx(q_only.q_tilde(2, th)));
    auto at_pi = center_equation(-1, 2, 1, kPi, 3);
    CHECK_THROWS_AS(m2_integrand(at_pi, 1.0), DomainError);
}

TEST_CASE("structured second-order bases")
{
    CHECK(m2_basis(1, kTwoPi, 1.5).size() == 3);
    CHECK(m2_basis(1, kPi / 2, 1.5).size() == 6);
    CHECK(m2_basis(2, kPi / 2, 1.5).size() == 15);
    CHECK(m2_basis(2, kPi, 1.5).size() == 10);
    CHECK(m2_basis(3, 5 * kPi / 4, 0.5).size() == 24);
}

TEST_CASE("structured fit reproduces the direct oracle")
{
    unsigned seed = 300;
    for (double t1 : {kPi / 2, 5 * kPi / 4, kPi, kTwoPi}) {
        for (auto [p, q] : {std::pair{-1, 2}, std::pair{3, 2}}) {
            auto eq = center_equation(p, q, 2, t1, seed++);
            auto res = m2_structured(eq);
            CHECK(res.fit_residual < 1e-7);
            auto w = res.form.domain;
            for (double rho : chebyshev_nodes(w.lo, w.hi, 7)) {
                double d = m2_direct(eq, rho);
                CHECK(std::fabs(eval_combination(res.form, rho) - d) / std::max(1.0, std::fabs(d)) < 1e-6);
            }
        }
    }
}

TEST_CASE("structured fit refuses equations with M1 != 0")
{
    std::mt19937 rng(1);
    auto eq = make_equation(-1, 2, 1, kPi / 2, random_poly(1, kPi / 2, rng), {}, random_poly(1, kPi / 2, rng), {});
    CHECK_THROWS_AS(m2_structured(eq), DomainError);
}
