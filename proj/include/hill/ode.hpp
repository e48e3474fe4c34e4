#ifndef HILL_ODE_HPP
#define HILL_ODE_HPP

// Embedded Dormand-Prince 5(4) pair on fixed-size complex systems,
// templated on the scalar.  Error control is componentwise
// relative+absolute; complex spectral parameters and complex potentials
// need no special casing.  The monodromy layer instantiates the stepper
// with long double so accumulated drift stays below the tightest
// acceptance tolerances even where the multipliers grow like e^{2pi|Im k|}.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include "hill/errors.hpp"

namespace hill {

template <std::size_t N, class Real = double>
using CVecT = std::array<std::complex<Real>, N>;

template <std::size_t N>
using CVec = CVecT<N, double>;

namespace detail {

template <std::size_t N, class Real>
inline bool finite(const CVecT<N, Real>& y) {
    for (const auto& v : y)
        if (!std::isfinite(double(v.real())) || !std::isfinite(double(v.imag())))
            return false;
    return true;
}

}  // namespace detail

struct NullObserver {
    template <std::size_t N, class Real>
    void operator()(Real, const CVecT<N, Real>&) const {}
};

// Integrates y' = f(x, y) from x0 to x1 (x1 > x0).  rtol/atol control the
// local error per step; the observer is invoked at x0 and after every
// accepted step.  Throws Error(step_size_underflow) if adaptivity stalls,
// e.g. on non-finite right-hand sides.
template <std::size_t N, class Real = double, class RHS,
          class Observer = NullObserver>
CVecT<N, Real> integrate_dopri5(RHS&& f, CVecT<N, Real> y, Real x0, Real x1,
                                Real rtol, Real atol,
                                Observer&& observe = {}) {
    static constexpr Real c2 = Real(1) / 5, c3 = Real(3) / 10,
                          c4 = Real(4) / 5, c5 = Real(8) / 9;
    static constexpr Real a21 = Real(1) / 5;
    static constexpr Real a31 = Real(3) / 40, a32 = Real(9) / 40;
    static constexpr Real a41 = Real(44) / 45, a42 = Real(-56) / 15,
                          a43 = Real(32) / 9;
    static constexpr Real a51 = Real(19372) / 6561, a52 = Real(-25360) / 2187,
                          a53 = Real(64448) / 6561, a54 = Real(-212) / 729;
    static constexpr Real a61 = Real(9017) / 3168, a62 = Real(-355) / 33,
                          a63 = Real(46732) / 5247, a64 = Real(49) / 176,
                          a65 = Real(-5103) / 18656;
    static constexpr Real b1 = Real(35) / 384, b3 = Real(500) / 1113,
                          b4 = Real(125) / 192, b5 = Real(-2187) / 6784,
                          b6 = Real(11) / 84;
    static constexpr Real e1 = Real(71) / 57600, e3 = Real(-71) / 16695,
                          e4 = Real(71) / 1920, e5 = Real(-17253) / 339200,
                          e6 = Real(22) / 525, e7 = Real(-1) / 40;

    const Real span = x1 - x0;
    if (span <= Real(0)) {
        observe(x0, y);
        return y;
    }
    const Real h_floor = Real(1e-14) * span;

    Real x = x0;
    Real h = span / 100;
    observe(x, y);

    CVecT<N, Real> k1, k2, k3, k4, k5, k6, k7, yt, ynew;
    f(x, y, k1);
    if (!detail::finite<N, Real>(k1))
        throw Error(ErrorCode::step_size_underflow,
                    "non-finite right-hand side at integration start");

    long iterations = 0;
    while (x < x1) {
        if (++iterations > 100000000L)
            throw Error(ErrorCode::step_size_underflow,
                        "step limit exceeded in dopri5");
        if (h < h_floor)
            throw Error(ErrorCode::step_size_underflow,
                        "step size underflow in dopri5");
        if (x + h > x1) h = x1 - x;

        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f(x + c2 * h, yt, k2);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(x + c3 * h, yt, k3);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(x + c4 * h, yt, k4);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] +
                    h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(x + c5 * h, yt, k5);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        f(x + h, yt, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        f(x + h, ynew, k7);

        if (!detail::finite<N, Real>(ynew) || !detail::finite<N, Real>(k7)) {
            h *= Real(0.25);
            continue;
        }

        Real err2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const std::complex<Real> e =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);
            const Real sc =
                atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const Real r = std::abs(e) / sc;
            err2 += r * r;
        }
        const double err = std::sqrt(double(err2) / double(N));

        if (err <= 1.0) {
            x += h;
            y = ynew;
            k1 = k7;  // FSAL
            observe(x, y);
            const double fac =
                (err == 0.0)
                    ? 5.0
                    : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            h *= Real(fac);
        } else {
            h *= Real(
                std::max(0.2, std::min(1.0, 0.9 * std::pow(err, -0.2))));
        }
    }
    return y;
}

}  // namespace hill

#endif
