#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "hill/potential.hpp"
#include "hill/quadrature.hpp"
#include "testutil.hpp"

using hill::cplx;
using hill::Potential;
using hill::PotentialKind;
using hill::two_pi;

namespace {

// Independent oracle: plain term-by-term summation of a Fourier series.
cplx fourier_sum(const std::map<int, cplx>& coeffs, double x) {
    cplx s = 0.0;
    for (const auto& [n, c] : coeffs) s += c * std::polar(1.0, n * x);
    return s;
}

// Independent oracle: partial sums of the one-sided expansion of q_m,
// 2 m^2 sum_n (-1)^{n+1} n a^n e^{i n m x}, |a| < 1.
cplx gasymov_series(int m, cplx a, double x, int terms) {
    cplx s = 0.0, an = 1.0;
    for (int n = 1; n <= terms; ++n) {
        an *= a;
        const double sgn = (n % 2) ? 1.0 : -1.0;
        s += sgn * double(n) * an * std::polar(1.0, n * m * x);
    }
    return 2.0 * double(m) * double(m) * s;
}

}  // namespace

TEST_CASE("fourier constructor") {
    SECTION("empty map is the zero potential") {
        const auto p = Potential::fourier({});
        REQUIRE(p.kind() == PotentialKind::zero);
        REQUIRE(p.evaluate(1.234) == cplx(0.0));
    }
    SECTION("single positive mode") {
        const auto p = Potential::fourier({{1, cplx(1.0)}});
        REQUIRE(std::abs(p.evaluate(0.0) - cplx(1.0)) < 1e-15);
        REQUIRE(std::abs(p.evaluate(hill::pi) - cplx(-1.0)) < 1e-15);
    }
    SECTION("4 cos x against direct summation") {
        const std::map<int, cplx> coeffs{{1, cplx(2.0)}, {-1, cplx(2.0)}};
        const auto p = Potential::fourier(coeffs);
        REQUIRE(std::abs(p.evaluate(0.0) - cplx(4.0)) < 1e-14);
        for (double x : {0.0, 0.3, 1.7, 5.0, -2.2}) {
            REQUIRE(std::abs(p.evaluate(x) - fourier_sum(coeffs, x)) < 1e-13);
            REQUIRE(std::abs(p.evaluate(x) - 4.0 * std::cos(x)) < 1e-13);
        }
    }
}

TEST_CASE("gasymov closed form") {
    SECTION("value at x = 0 for m=1, a=1/2") {
        const auto p = Potential::gasymov(1, cplx(0.5));
        REQUIRE(std::abs(p.evaluate(0.0) - cplx(4.0 / 9.0)) < 1e-15);
    }
    SECTION("matches one-sided series, 60 terms") {
        const auto p = Potential::gasymov(1, cplx(0.5));
        REQUIRE(std::abs(p.evaluate(0.3) - gasymov_series(1, 0.5, 0.3, 60)) <
                1e-12);
    }
    SECTION("m=2, a=3: a-inverse series and zero mean") {
        const auto p = Potential::gasymov(2, cplx(3.0));
        // For |a| > 1 the expansion runs over negative frequencies with
        // parameter 1/a; same oracle with conjugated exponent.
        auto series = [](int m, cplx a, double x, int terms) {
            cplx s = 0.0, an = 1.0;
            const cplx ai = 1.0 / a;
            for (int n = 1; n <= terms; ++n) {
                an *= ai;
                const double sgn = (n % 2) ? 1.0 : -1.0;
                s += sgn * double(n) * an * std::polar(1.0, -n * m * x);
            }
            return 2.0 * double(m) * double(m) * s;
        };
        REQUIRE(std::abs(p.evaluate(0.7) - series(2, 3.0, 0.7, 80)) < 1e-12);
        const cplx quad_mean =
            hill::integrate_adaptive([&](double x) { return p.evaluate(x); },
                                     0.0, two_pi) /
            two_pi;
        REQUIRE(std::abs(quad_mean) < 1e-12);
        REQUIRE(std::abs(p.mean()) == 0.0);
    }
    SECTION("invalid parameters rejected") {
        REQUIRE_THROWS_AS(Potential::gasymov(1, cplx(0.0)), hill::Error);
        REQUIRE_THROWS_AS(Potential::gasymov(1, cplx(1.0)), hill::Error);
        REQUIRE_THROWS_AS(Potential::gasymov(2, std::polar(1.0, 0.7)),
                          hill::Error);
    }
    SECTION("a-form equals 1/a-form pointwise") {
        const int m = 2;
        const cplx a(0.4, 0.3);
        const auto p = Potential::gasymov(m, a);
        const cplx ai = 1.0 / a;
        for (double x : {0.0, 0.5, 1.9, 4.4}) {
            const cplx w = ai * std::polar(1.0, -m * x);
            const cplx alt = 2.0 * double(m * m) * w / ((w + 1.0) * (w + 1.0));
            REQUIRE(std::abs(p.evaluate(x) - alt) < 1e-13);
        }
    }
}

TEST_CASE("shift") {
    SECTION("zero stays zero") {
        REQUIRE(Potential::zero().shift(cplx(0.3, -2.0)).kind() ==
                PotentialKind::zero);
    }
    SECTION("gasymov parameter moved onto |a| = 1 is rejected") {
        const auto p = Potential::gasymov(1, cplx(0.25));
        const cplx xi(0.0, -std::log(4.0));
        REQUIRE_THROWS_AS(p.shift(xi), hill::Error);
        try {
            p.shift(xi);
        } catch (const hill::Error& e) {
            REQUIRE(e.code() == hill::ErrorCode::pole_on_real_axis);
        }
    }
    SECTION("fourier mode picks up the phase factor") {
        const auto p = Potential::fourier({{1, cplx(1.0)}});
        const auto q = p.shift(hill::pi);
        REQUIRE(std::abs(q.fourier_coeffs().at(1) - cplx(-1.0)) < 1e-15);
    }
    SECTION("composition: shift(shift(p, a), b) == shift(p, a+b) pointwise") {
        const auto p = Potential::fourier(
            {{-2, cplx(0.1, 0.4)}, {1, cplx(1.0)}, {3, cplx(0.0, -0.2)}});
        const cplx xi1(0.7, 0.1), xi2(-1.2, 0.05);
        const auto lhs = p.shift(xi1).shift(xi2);
        const auto rhs = p.shift(xi1 + xi2);
        for (double x : {0.0, 0.9, 2.5, 6.0})
            REQUIRE(std::abs(lhs.evaluate(x) - rhs.evaluate(x)) < 1e-13);
    }
    SECTION("mean invariant under real shift") {
        const auto p = Potential::fourier({{0, cplx(2.0, -1.0)},
                                           {1, cplx(0.5)},
                                           {-3, cplx(0.0, 1.0)}});
        REQUIRE(std::abs(p.shift(1.3).mean() - p.mean()) < 1e-14);
        const auto g = Potential::gasymov(1, cplx(0.5));
        REQUIRE(std::abs(g.shift(2.1).mean() - g.mean()) < 1e-14);
        const auto w = Potential::shifted(g, cplx(0.4));
        REQUIRE(std::abs(w.mean() - g.mean()) < 1e-12);
    }
}

TEST_CASE("mean") {
    REQUIRE(Potential::zero().mean() == cplx(0.0));
    const auto p =
        Potential::fourier({{0, cplx(3.0, 4.0)}, {2, cplx(7.0)}});
    REQUIRE(p.mean() == cplx(3.0, 4.0));
    REQUIRE(Potential::gasymov(1, cplx(0.5)).mean() == cplx(0.0));
}

TEST_CASE("antiderivative") {
    SECTION("zero") { REQUIRE(Potential::zero().antiderivative(5.0) == cplx(0.0)); }
    SECTION("full period of a zero-mean mode vanishes") {
        const auto p = Potential::fourier({{1, cplx(1.0)}});
        REQUIRE(std::abs(p.antiderivative(two_pi)) < 1e-14);
    }
    SECTION("constant mode is linear") {
        const cplx c(1.5, -0.5);
        const auto p = Potential::fourier({{0, c}});
        REQUIRE(std::abs(p.antiderivative(2.0) - c * 2.0) < 1e-14);
    }
    SECTION("Q' = q and Q(0) = 0 for gasymov, against quadrature") {
        const auto p = Potential::gasymov(2, cplx(0.3, 0.2));
        REQUIRE(p.antiderivative(0.0) == cplx(0.0));
        for (double x : {0.5, 1.3, 4.0}) {
            const cplx quad = hill::integrate_adaptive(
                [&](double t) { return p.evaluate(t); }, 0.0, x);
            REQUIRE(std::abs(p.antiderivative(x) - quad) < 1e-12);
            const double h = 1e-6;
            const cplx fd =
                (p.antiderivative(x + h) - p.antiderivative(x - h)) / (2 * h);
            REQUIRE(std::abs(fd - p.evaluate(x)) < 1e-8);
        }
    }
}

TEST_CASE("periodicity of every variant") {
    const auto pts = testutil::random_rect(100, -7.0, 7.0, 0.0, 0.0, 17);
    const Potential variants[] = {
        Potential::zero(),
        Potential::fourier({{-2, cplx(0.3, 0.1)}, {1, cplx(1.0, -0.5)}}),
        Potential::gasymov(2, cplx(0.6, 0.1)),
        Potential::shifted(Potential::gasymov(1, cplx(0.5)), cplx(0.2, 0.1)),
    };
    for (const auto& p : variants) {
        for (const auto& z : pts) {
            const double x = z.real();
            REQUIRE(std::abs(p.evaluate(x + two_pi) - p.evaluate(x)) < 1e-13);
        }
    }
}

TEST_CASE("json round trip") {
    const Potential variants[] = {
        Potential::zero(),
        Potential::fourier({{-1, cplx(0.25, 0.0)}, {1, cplx(0.25, 0.0)}}),
        Potential::gasymov(1, cplx(0.5, 0.0)),
        Potential::shifted(Potential::gasymov(1, cplx(0.5)), cplx(0.3, 0.2)),
    };
    for (const auto& p : variants) {
        const auto j = p.to_json();
        const auto q = Potential::from_json(j);
        REQUIRE(q.to_json().dump() == j.dump());
        for (double x : {0.0, 1.1, 3.9})
            REQUIRE(std::abs(p.evaluate(x) - q.evaluate(x)) < 1e-15);
    }
    REQUIRE_THROWS_AS(Potential::from_json({{"type", "nope"}}), hill::Error);
}

TEST_CASE("summary") {
    const auto g = Potential::gasymov(1, cplx(0.5)).summary();
    REQUIRE(g.is_gasymov_onesided);
    REQUIRE(std::abs(g.mean) == 0.0);

    const auto two_sided =
        Potential::fourier({{-1, cplx(1.0)}, {1, cplx(1.0)}}).summary();
    REQUIRE_FALSE(two_sided.is_gasymov_onesided);
    REQUIRE(two_sided.fourier_truncation == 1);

    const auto one_sided =
        Potential::fourier({{1, cplx(1.0)}, {3, cplx(0.5)}}).summary();
    REQUIRE(one_sided.is_gasymov_onesided);
    REQUIRE(one_sided.fourier_truncation == 3);
}
