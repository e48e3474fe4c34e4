#ifndef HILL_COMPLEXFN_HPP
#define HILL_COMPLEXFN_HPP

// Entire building blocks for Hill-discriminant work.  Everything here is a
// single-valued function of lambda even when written with sqrt(lambda):
// only even combinations of k = sqrt(lambda) appear, so the principal
// branch gives the unique entire continuation.  Removable singularities
// (lambda = 0, lattice points n^2/4) are evaluated by local series or by
// exact trigonometric divided-difference identities, never by naive 0/0.

#include <cmath>
#include <complex>
#include <numbers>

namespace hill {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// sin(z)/z, entire.
inline cplx sinc(cplx z) {
    const cplx z2 = z * z;
    if (std::abs(z2) < 1e-2) {
        // |z^2| <= 1e-2: 7 terms leave a remainder below 1e-25.
        cplx sum = 1.0, term = 1.0;
        for (int j = 1; j <= 7; ++j) {
            term *= -z2 / double((2 * j) * (2 * j + 1));
            sum += term;
        }
        return sum;
    }
    return std::sin(z) / z;
}

// (z cos z - sin z)/z^3, entire; equals d/dz [sin(z)/z] / z.
inline cplx sinc_d1(cplx z) {
    const cplx z2 = z * z;
    if (std::abs(z2) < 1e-2) {
        // sum_{j>=1} (-1)^j 2j z^{2j-2} / (2j+1)!
        cplx sum = 0.0, pw = 1.0;
        double fact = 6.0;  // (2*1+1)!
        for (int j = 1; j <= 8; ++j) {
            sum += ((j % 2) ? -1.0 : 1.0) * (2.0 * j) * pw / fact;
            pw *= z2;
            fact *= double(2 * j + 2) * double(2 * j + 3);
        }
        return sum;
    }
    return (z * std::cos(z) - std::sin(z)) / (z2 * z);
}

// cos(sqrt(lambda) x), entire in lambda.
inline cplx cos_sqrt(cplx lambda, double x) {
    return std::cos(std::sqrt(lambda) * x);
}

// sin(sqrt(lambda) x)/sqrt(lambda), entire in lambda; the unperturbed
// solution v~(x; lambda).
inline cplx sin_sqrt_over(cplx lambda, double x) {
    return x * sinc(std::sqrt(lambda) * x);
}

// d/dlambda of cos(sqrt(lambda) x) = -(x/2) sin(sqrt(lambda) x)/sqrt(lambda).
inline cplx dcos_sqrt(cplx lambda, double x) {
    return -0.5 * x * sin_sqrt_over(lambda, x);
}

// d/dlambda of sin(sqrt(lambda) x)/sqrt(lambda)
//   = (x k cos(kx) - sin(kx)) / (2 k^3),  k = sqrt(lambda).
inline cplx dsin_sqrt_over(cplx lambda, double x) {
    return 0.5 * x * x * x * sinc_d1(std::sqrt(lambda) * x);
}

// Hill discriminant of the zero potential: 2 cos(2 pi sqrt(lambda)).
inline cplx delta_free(cplx lambda) { return 2.0 * cos_sqrt(lambda, two_pi); }

// sin(2 pi sqrt(mu)) / (2 pi sqrt(mu)) = prod_{j>=1} (1 - 4 mu / j^2).
inline cplx sinc_euler(cplx mu) { return sinc(two_pi * std::sqrt(mu)); }

// W_m(lambda) = sin(2 pi k)/(k (lambda - m^2/4)), k = sqrt(lambda): the
// unperturbed v~(2pi; .) with its zero at m^2/4 removed.  Entire in lambda.
inline cplx lattice_sinc(int m, cplx lambda) {
    const cplx k = std::sqrt(lambda);
    const cplx delta = k - 0.5 * m;
    if (std::abs(delta) < 0.1) {
        const double sgn = (m % 2) ? -1.0 : 1.0;
        return sgn * two_pi * sinc(two_pi * delta) / (k * (k + 0.5 * m));
    }
    return sin_sqrt_over(lambda, two_pi) / (lambda - 0.25 * double(m) * double(m));
}

// (n^2/4 - mu) / sinc_euler(mu): removes the n-th zero of the Euler product.
// Has genuine poles at the other lattice points j^2/4, j != n.
inline cplx lattice_ratio(int n, cplx mu) {
    const cplx kappa = std::sqrt(mu);
    const cplx delta = kappa - 0.5 * n;
    if (std::abs(delta) < 0.1) {
        const double sgn = (n % 2) ? 1.0 : -1.0;  // (-1)^{n+1}
        return sgn * kappa * (kappa + 0.5 * n) / sinc(two_pi * delta);
    }
    return (0.25 * double(n) * double(n) - mu) / sinc_euler(mu);
}

// Divided difference [cos(k x) - cos(k* x)] / (lambda - lambda*), evaluated
// without cancellation via cos A - cos B = -2 sin((A+B)/2) sin((A-B)/2).
// Requires k + k* away from 0 (holds near a positive lattice point).
inline cplx ddiff_cos_sqrt(cplx lambda, cplx lambda_star, double x) {
    const cplx k = std::sqrt(lambda), ks = std::sqrt(lambda_star);
    const cplx sum = k + ks, dif = k - ks;
    return -x * std::sin(0.5 * sum * x) * sinc(0.5 * dif * x) / sum;
}

// Divided difference [sin(kx)/k - sin(k*x)/k*] / (lambda - lambda*).
inline cplx ddiff_sin_sqrt_over(cplx lambda, cplx lambda_star, double x) {
    const cplx k = std::sqrt(lambda), ks = std::sqrt(lambda_star);
    const cplx sum = k + ks, dif = k - ks;
    const cplx num = ks * x * std::cos(0.5 * sum * x) * sinc(0.5 * dif * x) -
                     std::sin(ks * x);
    return num / (k * ks * sum);
}

}  // namespace hill

#endif
