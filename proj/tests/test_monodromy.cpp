#include <catch_amalgamated.hpp>

#include <cmath>

#include "hill/gasymov.hpp"
#include "hill/monodromy.hpp"
#include "hill/potential.hpp"
#include "testutil.hpp"

using hill::cplx;
using hill::Potential;
using hill::two_pi;
using testutil::rel_err;

namespace {
constexpr double kTol = 1e-12;
}

TEST_CASE("fundamental system, zero potential") {
    const auto p = Potential::zero();
    SECTION("lambda = 1: u(2pi) = 1, v(2pi) = 0") {
        const auto fd = hill::floquet_data(p, cplx(1.0), kTol);
        REQUIRE(std::abs(fd.u2pi - cplx(1.0)) < 1e-11);
        REQUIRE(std::abs(fd.v2pi) < 1e-11);
        REQUIRE(std::abs(fd.dv2pi - cplx(1.0)) < 1e-11);
    }
    SECTION("lambda = 0: v(x) = x") {
        const auto fd = hill::floquet_data(p, cplx(0.0), kTol);
        REQUIRE(std::abs(fd.v2pi - cplx(two_pi)) < 1e-11);
        REQUIRE(std::abs(fd.u2pi - cplx(1.0)) < 1e-12);
    }
    SECTION("wronskian = 1 along the whole trace") {
        const auto tr = hill::fundamental_system(p, cplx(2.0, 0.7), kTol);
        REQUIRE(tr.xs.size() > 5);
        for (std::size_t i = 0; i < tr.xs.size(); ++i) {
            REQUIRE(testutil::wronskian_residual(tr.u[i], tr.dv[i], tr.v[i],
                                                 tr.du[i]) < 1e-11);
        }
        REQUIRE(tr.xs.front() == 0.0);
        REQUIRE(tr.xs.back() == Catch::Approx(two_pi));
    }
}

TEST_CASE("constant potential shifts the spectral parameter") {
    const cplx c(1.0, 1.0);
    const auto p = Potential::fourier({{0, c}});
    const cplx lambda(2.0, 0.0);
    const auto fd = hill::floquet_data(p, lambda, kTol);
    const auto fd0 = hill::floquet_data(Potential::zero(), lambda - c, kTol);
    REQUIRE(std::abs(fd.u2pi - fd0.u2pi) < 1e-10);
    REQUIRE(std::abs(fd.v2pi - fd0.v2pi) < 1e-10);
    REQUIRE(std::abs(fd.du2pi - fd0.du2pi) < 1e-10);
    REQUIRE(std::abs(fd.dv2pi - fd0.dv2pi) < 1e-10);
}

TEST_CASE("floquet data, discriminant and multipliers") {
    const auto p = Potential::zero();
    SECTION("lambda = 1/4: Delta = -2, rho = -1 double") {
        const auto fd = hill::floquet_data(p, cplx(0.25), kTol);
        REQUIRE(std::abs(fd.delta - cplx(-2.0)) < 1e-10);
        REQUIRE(std::abs(fd.rho1 - cplx(-1.0)) < 1e-5);
        REQUIRE(std::abs(fd.rho2 - cplx(-1.0)) < 1e-5);
    }
    SECTION("lambda = -1: Delta = 2 cosh(2pi)") {
        const auto fd = hill::floquet_data(p, cplx(-1.0), kTol);
        REQUIRE(rel_err(fd.delta, 2.0 * std::cosh(two_pi)) < 1e-11);
        REQUIRE(std::abs(fd.rho1) > 1.0);
    }
    SECTION("multiplier algebra") {
        for (const auto lam : testutil::random_rect(20, -3.0, 20.0, -1.0, 1.0, 3)) {
            const auto fd = hill::floquet_data(p, lam, kTol);
            REQUIRE(std::abs(fd.rho1 * fd.rho2 - cplx(1.0)) < 1e-14);
            REQUIRE(std::abs(fd.rho1 + fd.rho2 - fd.delta) <
                    1e-14 * (1.0 + std::abs(fd.delta)));
            REQUIRE(std::abs(fd.rho1) >= std::abs(fd.rho2) * (1.0 - 1e-12));
        }
    }
    SECTION("gasymov potential keeps the free discriminant") {
        const auto g = Potential::gasymov(1, cplx(0.5));
        const cplx lambda(0.2);
        const auto fd = hill::floquet_data(g, lambda, kTol);
        REQUIRE(std::abs(fd.delta - hill::delta_free(lambda)) < 1e-9);
    }
}

TEST_CASE("discriminant in k") {
    const auto p = Potential::zero();
    REQUIRE(std::abs(hill::discriminant_k(p, cplx(0.5), kTol) - cplx(-2.0)) <
            1e-10);
    REQUIRE(rel_err(hill::discriminant_k(p, cplx(0.0, 1.0), kTol),
                    2.0 * std::cosh(two_pi)) < 1e-11);

    const auto g = Potential::gasymov(2, cplx(0.3, 0.1));
    const cplx k(0.37, -0.21);
    const cplx dplus = hill::discriminant_k(g, k, kTol);
    const cplx dminus = hill::discriminant_k(g, -k, kTol);
    REQUIRE(dplus.real() == dminus.real());  // bit-identical: same lambda
    REQUIRE(dplus.imag() == dminus.imag());
}

TEST_CASE("discriminant derivative") {
    SECTION("zero potential at lambda = 1/4") {
        REQUIRE(std::abs(hill::discriminant_derivative(Potential::zero(),
                                                       cplx(0.25), kTol)) <
                1e-9);
    }
    SECTION("-4 pi^2 at lambda = 0 when the spectrum is the half-line") {
        const double target = -4.0 * hill::pi * hill::pi;
        for (const auto& p :
             {Potential::zero(), Potential::gasymov(1, cplx(0.5)),
              Potential::gasymov(2, cplx(3.0))}) {
            const cplx d = hill::discriminant_derivative(p, cplx(0.0), kTol);
            REQUIRE(std::abs(d - target) < 1e-6 * std::abs(target));
        }
    }
    SECTION("matches central finite differences of Delta") {
        const auto p = Potential::gasymov(1, cplx(0.5));
        for (const auto lam :
             testutil::random_rect(8, -1.0, 9.0, -0.5, 0.5, 11)) {
            const double h = 1e-5 * (1.0 + std::abs(lam));
            const cplx fd = testutil::central_diff(
                [&](cplx z) { return hill::discriminant(p, z, kTol); }, lam,
                h);
            const cplx an = hill::discriminant_derivative(p, lam, kTol);
            REQUIRE(std::abs(an - fd) < 1e-6 * (1.0 + std::abs(an)));
        }
    }
    SECTION("agrees with the variational route") {
        const auto p = Potential::fourier({{1, cplx(0.2)}, {-1, cplx(0.2)}});
        for (const auto lam :
             testutil::random_rect(6, -1.0, 12.0, -0.7, 0.7, 23)) {
            const cplx vp = hill::discriminant_derivative(p, lam, kTol);
            const cplx var = hill::variational_data(p, lam, kTol).ddelta_dl;
            REQUIRE(std::abs(vp - var) < 1e-8 * (1.0 + std::abs(var)));
        }
    }
}

// det S - 1 is dimensionless drift of the step maps; where multipliers grow
// like e^{2 pi |Im k|} the identity is only certifiable up to the
// conditioning floor of the compensated 2x2 determinant, hence the second
// term in the bound.
TEST_CASE("det S = 1 across the lambda disk") {
    const double tol = 1e-12;
    const Potential variants[] = {
        Potential::zero(),
        Potential::fourier({{-1, cplx(0.3, 0.1)}, {2, cplx(0.2)}}),
        Potential::gasymov(1, cplx(0.5)),
    };
    for (const auto& p : variants) {
        for (const auto lam : testutil::random_disk(50, 50.0, 7)) {
            const auto fd = hill::floquet_data(p, lam, tol);
            const double scale = std::abs(fd.u2pi) * std::abs(fd.dv2pi) +
                                 std::abs(fd.v2pi) * std::abs(fd.du2pi);
            // narrowed entries carry an unavoidable eps*scale representation
            // error on top of the integration drift
            const double resid = testutil::wronskian_residual(
                fd.u2pi, fd.dv2pi, fd.v2pi, fd.du2pi);
            REQUIRE(resid < std::max(10.0 * tol, 4e-16 * scale));
            // the in-engine residual sees the drift itself; per-component
            // rounding random-walks det by ~eps_ld sqrt(N) * scale
            REQUIRE(fd.det_residual < std::max(10.0 * tol, 3e-17 * scale));
        }
    }
}

TEST_CASE("shift invariance of the discriminant") {
    const auto lams = testutil::random_rect(20, -1.0, 18.0, -0.5, 0.5, 51);
    SECTION("real shifts, gasymov potential") {
        const auto p = Potential::gasymov(1, cplx(0.5));
        for (double xi : {0.3, 1.7, hill::pi}) {
            const auto ps = p.shift(xi);
            for (const auto lam : lams) {
                const cplx d0 = hill::discriminant(p, lam, kTol);
                const cplx d1 = hill::discriminant(ps, lam, kTol);
                REQUIRE(std::abs(d1 - d0) < 1e-8 * (1.0 + std::abs(d0)));
            }
        }
    }
    SECTION("complex shifts, entire fourier potential") {
        const auto p =
            Potential::fourier({{-1, cplx(0.2, 0.1)}, {1, cplx(0.4)}});
        const cplx xi(0.4, 0.3);
        const auto ps = p.shift(xi);
        for (const auto lam : lams) {
            const cplx d0 = hill::discriminant(p, lam, kTol);
            const cplx d1 = hill::discriminant(ps, lam, kTol);
            REQUIRE(std::abs(d1 - d0) < 1e-8 * (1.0 + std::abs(d0)));
        }
    }
}

TEST_CASE("convergence with tol against the closed-form oracle") {
    const int m = 1;
    const cplx a(0.5);
    const auto p = Potential::gasymov(m, a);
    const cplx lambda(3.3, 0.4);
    const cplx exact = hill::gasymov::v_2pi(m, a, lambda);
    double prev_err = -1.0;
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        const auto fd = hill::floquet_data(p, lambda, tol);
        const double err = std::abs(fd.v2pi - exact);
        if (prev_err > 0.0) REQUIRE(err < prev_err);
        prev_err = err;
    }
    // 10000x tighter tol must buy at least ~100x accuracy.
    const double loose =
        std::abs(hill::floquet_data(p, lambda, 1e-6).v2pi - exact);
    const double tight =
        std::abs(hill::floquet_data(p, lambda, 1e-10).v2pi - exact);
    REQUIRE(tight < 1e-2 * loose + 1e-15);
}

TEST_CASE("engine cache returns identical data") {
    hill::MonodromyEngine eng(Potential::gasymov(1, cplx(0.5)));
    const cplx lam(1.7, 0.3);
    const auto a = eng.floquet(lam, kTol);
    const auto b = eng.floquet(lam, kTol);
    REQUIRE(a.delta == b.delta);
    REQUIRE(a.v2pi == b.v2pi);
    const auto v = eng.variational(lam, kTol);
    REQUIRE(std::abs(v.fd.delta - a.delta) < 1e-12);
}

TEST_CASE("tolerance precondition") {
    REQUIRE_THROWS_AS(
        hill::floquet_data(Potential::zero(), cplx(1.0), 1e-15),
        hill::Error);
    REQUIRE_THROWS_AS(hill::floquet_data(Potential::zero(), cplx(1.0), 1e-3),
                      hill::Error);
}
