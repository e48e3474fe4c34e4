#ifndef HILL_GASYMOV_HPP
#define HILL_GASYMOV_HPP

// Closed-form Floquet data for the one-sided family
//   q_m(x) = 2 m^2 a e^{imx} / (a e^{imx} + 1)^2,   a != 0, |a| != 1.
//
// Every fundamental-solution entry is written as
//   [P(lambda) Sx + R(lambda) C] / (const * (lambda - m^2/4)),
// with C = cos(sqrt(lambda) x), Sx = sin(sqrt(lambda) x)/sqrt(lambda) and
// P, R polynomials of degree <= 2 whose coefficients depend on x through
// w = a e^{imx}.  The numerator vanishes at m^2/4, and near that point the
// quotient is evaluated through exact trigonometric divided differences,
// so the formulas hold at every lambda including the removable points
// lambda = 0 and lambda = m^2/4.  Also: the Frobenius-series Floquet
// solution for general one-sided Fourier data.

#include <complex>
#include <functional>
#include <vector>

#include "hill/complexfn.hpp"
#include "hill/errors.hpp"
#include "hill/monodromy.hpp"
#include "hill/potential.hpp"

namespace hill {
namespace gasymov {

namespace detail {

struct Poly2 {
    cplx c0{}, c1{}, c2{};
    cplx at(cplx z) const { return c0 + z * (c1 + z * c2); }
    // (P(z) - P(zs)) / (z - zs), exact.
    cplx ddiff(cplx z, cplx zs) const { return c1 + c2 * (z + zs); }
};

// [P(lambda) Sx + R(lambda) C] / (lambda - lambda_star) for numerators that
// vanish at lambda_star.  Entire; the divided-difference branch inside the
// switch radius is an identity, not an approximation.
inline cplx entire_ratio(const Poly2& P, const Poly2& R, cplx lambda,
                         cplx lambda_star, double x) {
    if (std::abs(lambda - lambda_star) > 1e-3) {
        return (P.at(lambda) * sin_sqrt_over(lambda, x) +
                R.at(lambda) * cos_sqrt(lambda, x)) /
               (lambda - lambda_star);
    }
    return P.at(lambda_star) * ddiff_sin_sqrt_over(lambda, lambda_star, x) +
           P.ddiff(lambda, lambda_star) * sin_sqrt_over(lambda, x) +
           R.at(lambda_star) * ddiff_cos_sqrt(lambda, lambda_star, x) +
           R.ddiff(lambda, lambda_star) * cos_sqrt(lambda, x);
}

// x-dependent ingredients shared by all entries.
struct Frame {
    cplx w;    // a e^{imx}
    cplx g;    // m w / (w+1)
    cplx gp;   // g' = i m^2 w / (w+1)^2
    cplx c;    // (a-1)/(a+1)
    double m;
};

inline Frame frame(int m, cplx a, double x) {
    Frame f;
    f.m = double(m);
    f.w = a * std::exp(cplx(0.0, f.m) * x);
    const cplx den = f.w + 1.0;
    f.g = f.m * f.w / den;
    f.gp = cplx(0.0, 1.0) * f.m * f.m * f.w / (den * den);
    f.c = (a - 1.0) / (a + 1.0);
    return f;
}

}  // namespace detail

inline cplx lambda_star(int m) { return 0.25 * double(m) * double(m); }

// v(x; lambda) with v(0) = 0, v'(0) = 1; valid for every lambda.
inline cplx v(int m, cplx a, cplx lambda, double x) {
    const auto f = detail::frame(m, a, x);
    const cplx alpha = f.c * f.m * (f.m - 2.0 * f.g);
    const cplx beta = 2.0 * (f.m - 2.0 * f.g + f.c * f.m);
    const cplx i(0.0, 1.0);
    const detail::Poly2 P{i * alpha, 4.0 * i, 0.0};
    const detail::Poly2 R{beta, 0.0, 0.0};
    return detail::entire_ratio(P, R, lambda, lambda_star(m), x) / (4.0 * i);
}

inline cplx dv(int m, cplx a, cplx lambda, double x) {
    const auto f = detail::frame(m, a, x);
    const cplx alpha = f.c * f.m * (f.m - 2.0 * f.g);
    const cplx beta = 2.0 * (f.m - 2.0 * f.g + f.c * f.m);
    const cplx alpha_p = -2.0 * f.c * f.m * f.gp;
    const cplx beta_p = -4.0 * f.gp;
    const cplx i(0.0, 1.0);
    const detail::Poly2 P{i * alpha_p, -beta, 0.0};
    const detail::Poly2 R{i * alpha + beta_p, 4.0 * i, 0.0};
    return detail::entire_ratio(P, R, lambda, lambda_star(m), x) / (4.0 * i);
}

// u(x; lambda) with u(0) = 1, u'(0) = 0; valid for every lambda.
inline cplx u(int m, cplx a, cplx lambda, double x) {
    const auto f = detail::frame(m, a, x);
    const cplx p2 = 2.0 * (a + 1.0) * (a + 1.0);
    const cplx p1 = (a * a - 1.0) * f.m;
    const cplx p0 = -2.0 * a * f.m * f.m;
    const cplx h0 = 0.5 * f.m - f.g;
    const cplx t0 = p0 * h0, t1 = p1 * h0 + p0, t2 = p2 * h0 + p1, t3 = p2;
    const cplx i(0.0, 1.0);
    const detail::Poly2 P{i * t0, i * t2, 0.0};
    const detail::Poly2 R{t1, t3, 0.0};
    return detail::entire_ratio(P, R, lambda, lambda_star(m), x) / p2;
}

inline cplx du(int m, cplx a, cplx lambda, double x) {
    const auto f = detail::frame(m, a, x);
    const cplx p2 = 2.0 * (a + 1.0) * (a + 1.0);
    const cplx p1 = (a * a - 1.0) * f.m;
    const cplx p0 = -2.0 * a * f.m * f.m;
    const cplx h0 = 0.5 * f.m - f.g;
    const cplx h0p = -f.gp;
    const cplx t0 = p0 * h0, t1 = p1 * h0 + p0, t2 = p2 * h0 + p1, t3 = p2;
    const cplx t0p = p0 * h0p, t1p = p1 * h0p, t2p = p2 * h0p;
    const cplx i(0.0, 1.0);
    const detail::Poly2 P{i * t0p, i * t2p - t1, -t3};
    const detail::Poly2 R{i * t0 + t1p, i * t2, 0.0};
    return detail::entire_ratio(P, R, lambda, lambda_star(m), x) / p2;
}

// v(2pi; lambda) = W_m(lambda) (lambda - ((a-1)/(a+1))^2 m^2/4).
inline cplx v_2pi(int m, cplx a, cplx lambda) {
    const cplx c = (a - 1.0) / (a + 1.0);
    const cplx mu_m = c * c * lambda_star(m);
    return lattice_sinc(m, lambda) * (lambda - mu_m);
}

// Dirichlet zero mu_m = ((a-1)/(a+1))^2 m^2/4; the others sit at n^2/4.
inline cplx dirichlet_mu_m(int m, cplx a) {
    const cplx c = (a - 1.0) / (a + 1.0);
    return c * c * lambda_star(m);
}

// u'(2pi; lambda) = -W_m(lambda) [lambda^2 - (a^2+6a+1) m^2/(4(a+1)^2)
//                                  lambda + a^2 m^4/(a+1)^4].
inline cplx neumann_2pi(int m, cplx a, cplx lambda) {
    const cplx ap1 = a + 1.0;
    const double m2 = double(m) * double(m);
    const cplx s1 = (a * a + 6.0 * a + 1.0) * m2 / (4.0 * ap1 * ap1);
    const cplx s0 = a * a * m2 * m2 / (ap1 * ap1 * ap1 * ap1);
    return -lattice_sinc(m, lambda) * (lambda * lambda - s1 * lambda + s0);
}

// Full closed-form monodromy data; Delta collapses to 2 cos(2 pi sqrt(lambda)).
inline FloquetData closed_floquet(int m, cplx a, cplx lambda) {
    return make_floquet(lambda, u(m, a, lambda, two_pi),
                        v(m, a, lambda, two_pi), du(m, a, lambda, two_pi),
                        dv(m, a, lambda, two_pi));
}

// Floquet solution phi(x; k) = e^{ikx} [1 - (1/(k + m/2)) m a e^{imx} /
// (a e^{imx} + 1)]; multiplier e^{2 pi i k}.
inline cplx phi(int m, cplx a, cplx k, double x) {
    if (std::abs(k + 0.5 * m) < 1e-12)
        throw Error(ErrorCode::pole_at_half_integer,
                    "phi(x; k) has a pole at k = -m/2");
    const auto f = detail::frame(m, a, x);
    return std::exp(cplx(0.0, 1.0) * k * x) *
           (1.0 - f.g / (k + 0.5 * f.m));
}

inline cplx dphi(int m, cplx a, cplx k, double x) {
    if (std::abs(k + 0.5 * m) < 1e-12)
        throw Error(ErrorCode::pole_at_half_integer,
                    "phi(x; k) has a pole at k = -m/2");
    const auto f = detail::frame(m, a, x);
    const cplx i(0.0, 1.0);
    const cplx denom = k + 0.5 * f.m;
    return std::exp(i * k * x) * (i * k * (1.0 - f.g / denom) - f.gp / denom);
}

// Non-periodic second solution at k = 0 (lambda = 0):
//   (x - (4/(im)) / (a e^{imx} - 1)) phi(x; 0).
inline std::function<cplx(double)> second_solution_k0(int m, cplx a) {
    return [m, a](double x) {
        const auto f = detail::frame(m, a, x);
        const cplx im(0.0, double(m));
        const cplx phi0 = (1.0 - f.w) / (1.0 + f.w);
        return (x - 4.0 / (im * (f.w - 1.0))) * phi0;
    };
}

// Second solution at k = m/2 (lambda = m^2/4), neither periodic nor
// antiperiodic: (2 i m a x + a^2 e^{imx} - e^{-imx}) phi(x; m/2).
inline std::function<cplx(double)> second_solution_km(int m, cplx a) {
    return [m, a](double x) {
        const cplx i(0.0, 1.0);
        const cplx e = std::exp(i * double(m) * x);
        const cplx phim = std::exp(i * 0.5 * double(m) * x) / (a * e + 1.0);
        return (2.0 * i * double(m) * a * x + a * a * e - 1.0 / e) * phim;
    };
}

// Frobenius-series Floquet solution y = e^{ikx} sum a_n e^{inx} for
// q = sum_{j>=1} B_j e^{ijx}:  n (n + 2k) a_n = - sum_{j<=n} B_j a_{n-j}.
struct FrobeniusSolution {
    cplx k;
    std::vector<cplx> a_coeffs;  // a_0 = 1
    int m_base = 1;              // frequency step of stored coefficients
    double truncation_estimate = 0.0;

    cplx eval(double x) const {
        const cplx i(0.0, 1.0);
        cplx sum = 0.0;
        for (std::size_t n = 0; n < a_coeffs.size(); ++n)
            sum += a_coeffs[n] *
                   std::exp(i * double(n) * double(m_base) * x);
        return std::exp(i * k * x) * sum;
    }
};

inline FrobeniusSolution frobenius_solution(const std::vector<cplx>& B,
                                            cplx k, int N) {
    if (N < 1)
        throw Error(ErrorCode::bad_argument, "frobenius: N must be >= 1");
    FrobeniusSolution sol;
    sol.k = k;
    sol.a_coeffs.assign(std::size_t(N) + 1, cplx(0.0));
    sol.a_coeffs[0] = 1.0;
    for (int n = 1; n <= N; ++n) {
        const cplx denom = double(n) * (double(n) + 2.0 * k);
        if (std::abs(double(n) + 2.0 * k) < 1e-12)
            throw Error(ErrorCode::pole_at_half_integer,
                        "frobenius recurrence pole at k = -n/2, n = " +
                            std::to_string(n));
        cplx acc = 0.0;
        const int jmax = std::min<int>(n, int(B.size()));
        for (int j = 1; j <= jmax; ++j)
            acc += B[std::size_t(j) - 1] * sol.a_coeffs[std::size_t(n - j)];
        sol.a_coeffs[std::size_t(n)] = -acc / denom;
    }
    double tail = 0.0;
    for (int n = std::max(1, N - 2); n <= N; ++n)
        tail += std::abs(sol.a_coeffs[std::size_t(n)]);
    sol.truncation_estimate = tail;
    return sol;
}

// Integer-lattice Fourier coefficients B_1..B_len of q_m for |a| < 1:
// B_{nm} = 2 m^2 (-1)^{n+1} n a^n, zero off the m-lattice.
inline std::vector<cplx> fourier_B(int m, cplx a, int len) {
    if (std::abs(a) >= 1.0)
        throw Error(ErrorCode::bad_argument,
                    "fourier_B: positive-sided expansion needs |a| < 1");
    std::vector<cplx> B(std::size_t(len), cplx(0.0));
    cplx an = 1.0;
    for (int n = 1; n * m <= len; ++n) {
        an *= a;
        const double sgn = (n % 2) ? 1.0 : -1.0;
        B[std::size_t(n * m) - 1] =
            2.0 * double(m) * double(m) * sgn * double(n) * an;
    }
    return B;
}

}  // namespace gasymov
}  // namespace hill

#endif
