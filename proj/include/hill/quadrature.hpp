#ifndef HILL_QUADRATURE_HPP
#define HILL_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "hill/complexfn.hpp"

namespace hill {

// 16-point Gauss-Legendre rule on [-1, 1]; nodes/weights computed once by
// Newton iteration on the Legendre recurrence.
struct GaussLegendre16 {
    std::array<double, 16> x{}, w{};

    GaussLegendre16() {
        constexpr int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double t = std::cos(pi * (i + 0.75) / (n + 0.5));
            double p0 = 0, p1 = 0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = t;
                for (int j = 2; j <= n; ++j) {
                    const double p2 =
                        ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            p0 = 1.0;
            p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = -t;
            x[n - 1 - i] = t;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }

    static const GaussLegendre16& instance() {
        static const GaussLegendre16 rule;
        return rule;
    }
};

template <class F>
cplx gauss_panels(F&& f, double a, double b, int panels) {
    const auto& rule = GaussLegendre16::instance();
    const double hp = (b - a) / panels;
    cplx total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * hp;
        cplx acc = 0.0;
        for (int i = 0; i < 16; ++i)
            acc += rule.w[i] * f(lo + 0.5 * hp * (rule.x[i] + 1.0));
        total += 0.5 * hp * acc;
    }
    return total;
}

// Composite Gauss-Legendre with panel doubling until two consecutive
// refinement levels agree to abs_tol * (1 + |I|).
template <class F>
cplx integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-13) {
    if (a == b) return 0.0;
    cplx prev = gauss_panels(f, a, b, 1);
    for (int panels = 2; panels <= 4096; panels *= 2) {
        const cplx cur = gauss_panels(f, a, b, panels);
        if (std::abs(cur - prev) <= abs_tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace hill

#endif
