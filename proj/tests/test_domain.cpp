#include "abel/domain.hpp"
#include "abel/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace abel;

namespace {

// Composite Simpson, used as an independent check of the analytic integrals.
template <class F>
double simpson(F f, double a, double b, int n = 20000)
{
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

PiecewiseTrigPoly random_poly(int m, double theta1, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PiecewiseTrigPoly p = PiecewiseTrigPoly::zero(m, theta1);
    for (int k = 0; k <= m; ++k) {
        p.plus[k] = {k ? u(rng) : 0.0, u(rng)};
        p.minus[k] = {k ? u(rng) : 0.0, u(rng)};
    }
    if (std::fabs(theta1 - kTwoPi) < 1e-12) p.minus = p.plus;
    return p;
}

}  // namespace

TEST_CASE("alpha_of reduces (q-p)/(1-p)")
{
    CHECK(alpha_of(3, 2) == Rational{1, 2});
    CHECK(alpha_of(2, 3) == Rational{-1, 1});
    CHECK(alpha_of(-1, 2) == Rational{3, 2});
    CHECK_THROWS_AS(alpha_of(0, 2), DomainError);
    CHECK_THROWS_AS(alpha_of(2, 1), DomainError);
    CHECK_THROWS_AS(alpha_of(2, 2), DomainError);   // alpha = 0
    CHECK_THROWS_AS(alpha_of(3, -1), DomainError);  // alpha = 2
}

TEST_CASE("admissible exponent pairs never give a non-negative integer alpha")
{
    for (int p = -7; p <= 7; ++p) {
        for (int q = -7; q <= 7; ++q) {
            bool excluded = p == 0 || p == 1 || q == 0 || q == 1;
            if (!excluded && (q - 1) % (p - 1) == 0 && (q - 1) / (p - 1) <= 1) excluded = true;
            if (excluded) {
                CHECK_THROWS_AS(alpha_of(p, q), DomainError);
                continue;
            }
            Rational a = alpha_of(p, q);
            CHECK(a.den > 0);
            CHECK(!(a.den == 1 && a.num >= 0));
            CHECK(std::fabs(a.value() - double(q - p) / double(1 - p)) < 1e-15);
        }
    }
}

TEST_CASE("annulus case table")
{
    auto a3 = annulus_of(3);
    REQUIRE(a3.y_intervals.size() == 1);
    CHECK(a3.y_intervals[0].hi == -2.0);
    REQUIRE(a3.hp.has_value());
    CHECK(*a3.hp == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a3.x_intervals[1].hi == doctest::Approx(0.5));

    auto a2 = annulus_of(2);
    REQUIRE(a2.y_intervals.size() == 2);
    CHECK(a2.y_intervals[0].hi == -2.0);
    CHECK(a2.y_intervals[1].lo == 0.0);
    CHECK(*a2.hp == doctest::Approx(0.5));

    auto am1 = annulus_of(-1);
    REQUIRE(am1.y_intervals.size() == 1);
    CHECK(am1.y_intervals[0].lo == 0.0);
    CHECK(std::isinf(am1.y_intervals[0].hi));
    CHECK(!am1.hp.has_value());

    // p = -2: h = (-6)^{1/3} is the real cube root
    auto am2 = annulus_of(-2);
    CHECK(*am2.hp == doctest::Approx(-std::cbrt(6.0)));
}

TEST_CASE("base sign is constant in theta on both reduced components")
{
    for (double rho : {-40.0, -5.0, -2.5, -2.001, 0.001, 0.3, 1.0, 7.0}) {
        int s = branch_sign(rho);
        for (int i = 0; i <= 2000; ++i) {
            double th = kTwoPi * i / 2000.0;
            double b = 1.0 + rho - std::cos(th);
            CHECK((b > 0 ? 1 : -1) == s);
        }
    }
    CHECK_THROWS_AS(branch_sign(-1.0), DomainError);
}

TEST_CASE("real normalized scale")
{
    CHECK(real_normalized_scale(3, {1, 2}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(real_normalized_scale(-1, {3, 2}) == doctest::Approx(std::pow(2.0, 1.5)));
    CHECK(real_normalized_scale(2, {-1, 1}) == 1.0);
}

TEST_CASE("smooth polynomial evaluates as its plus zone")
{
    std::mt19937 rng(3);
    auto p = random_poly(3, kTwoPi, rng);
    for (int i = 0; i <= 100; ++i) {
        double th = kTwoPi * i / 100.0;
        CHECK(p.value(th) == PiecewiseTrigPoly::eval_zone(p.plus, th));
    }
}

TEST_CASE("analytic zone integrals match Simpson")
{
    std::mt19937 rng(11);
    for (double t1 : {kPi / 3, kPi, 5 * kPi / 4}) {
        auto p = random_poly(2, t1, rng);
        for (double th : {0.4, 2.0, 4.5, kTwoPi}) {
            double ref = th <= t1 ? simpson([&](double x) { return PiecewiseTrigPoly::eval_zone(p.plus, x); }, 0, th)
                                  : simpson([&](double x) { return PiecewiseTrigPoly::eval_zone(p.plus, x); }, 0, t1) +
                                        simpson([&](double x) { return PiecewiseTrigPoly::eval_zone(p.minus, x); }, t1, th);
            CHECK(p.integral_to(th) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("cached p10 agrees with quadrature")
{
    std::mt19937 rng(5);
    auto P1 = random_poly(2, kPi / 2, rng);
    auto eq = make_equation(-1, 2, 2, kPi / 2, P1, {}, {}, {});
    double ref = simpson([&](double x) { return PiecewiseTrigPoly::eval_zone(P1.plus, x); }, 0, kPi / 2) +
                 simpson([&](double x) { return PiecewiseTrigPoly::eval_zone(P1.minus, x); }, kPi / 2, kTwoPi);
    CHECK(std::fabs(eq.p10 - ref) < 1e-12);
}

TEST_CASE("center conditions")
{
    auto P1 = PiecewiseTrigPoly::zero(1, kPi / 2);
    auto eq0 = make_equation(-1, 2, 1, kPi / 2, P1, {}, {}, {});
    CHECK(center_conditions(eq0).holds);

    auto Q1 = PiecewiseTrigPoly::zero(1, kPi / 2);
    Q1.plus[1].c = 1.0;
    auto eq1 = make_equation(-1, 2, 1, kPi / 2, P1, {}, Q1, {});
    auto cc = center_conditions(eq1);
    CHECK(!cc.holds);
    REQUIRE(cc.violations.size() == 1);
    CHECK(cc.violations[0] == "d~11+!=0");

    auto Qpi = PiecewiseTrigPoly::zero(1, kPi);
    Qpi.plus[0].c = 1.0;
    Qpi.minus[0].c = -1.0;
    Qpi.plus[1].s = Qpi.minus[1].s = 0.7;
    auto eq2 = make_equation(-1, 2, 1, kPi, PiecewiseTrigPoly::zero(1, kPi), {}, Qpi, {});
    CHECK(center_conditions(eq2).holds);
}

TEST_CASE("theta1 = 2pi requires equal zones")
{
    auto Q = PiecewiseTrigPoly::zero(1, kTwoPi);
    Q.plus[1].c = 1.0;
    CHECK_THROWS_AS(make_equation(-1, 2, 1, kTwoPi, {}, {}, Q, {}), DomainError);
    Q.minus.clear();
    auto eq = make_equation(-1, 2, 1, kTwoPi, {}, {}, Q, {});
    CHECK(eq.Q1.minus[1].c == 1.0);
}

TEST_CASE("angle literals")
{
    CHECK(parse_angle("pi") == kPi);
    CHECK(parse_angle("2pi") == kTwoPi);
    CHECK(parse_angle("pi/2") == doctest::Approx(kPi / 2));
    CHECK(parse_angle("5pi/4") == doctest::Approx(5 * kPi / 4));
    CHECK(parse_angle("1.25") == 1.25);
    CHECK_THROWS_AS(parse_angle("half"), DomainError);
}

TEST_CASE("equation JSON round trip and diagnostics")
{
    std::mt19937 rng(9);
    auto eq = make_equation(3, 2, 2, 5 * kPi / 4, random_poly(2, 5 * kPi / 4, rng), random_poly(2, 5 * kPi / 4, rng),
                            random_poly(2, 5 * kPi / 4, rng), random_poly(2, 5 * kPi / 4, rng));
    auto back = equation_from_json_text(equation_to_json_text(eq));
    CHECK(back.theta1 == eq.theta1);
    for (int k = 0; k <= 2; ++k) {
        CHECK(back.Q1.minus[k].s == eq.Q1.minus[k].s);
        CHECK(back.P2.plus[k].c == eq.P2.plus[k].c);
    }
    CHECK(equation_from_json_text(R"({"p":-1,"q":2,"m":0,"theta1":"pi"})").tag() == CaseTag::Pi);

    try {
        equation_from_json_text("{\n  \"p\": 3,\n  \"q\": ,\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 8);
    }
    CHECK_THROWS_AS(equation_from_json_text(R"({"p":1,"q":2,"m":0,"theta1":1})"), DomainError);
}
