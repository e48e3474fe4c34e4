#ifndef HILL_MONODROMY_HPP
#define HILL_MONODROMY_HPP

// Fundamental solutions of -y'' + q y = lambda y on [0, 2pi], the Floquet
// matrix S(lambda), discriminant Delta(lambda) = tr S, multipliers, and two
// derivative routes:
//   * discriminant_derivative: variation-of-parameters formula carrying
//     int u^2, int v^2, int u v alongside the solve (7 complex components);
//   * variational_data: d/dlambda of the whole fundamental system
//     (8 complex components), used by Newton refiners and contour traces.
//
// Delta is always computed as a function of lambda directly; D(k) is a thin
// wrapper over lambda = k^2, which keeps D even in k bit-for-bit.
//
// The steppers run in long double with a per-step tolerance three orders
// tighter than the requested result tolerance: accumulated drift then stays
// below the caller's tol even where entries grow like e^{2 pi |Im k|}.

#include <complex>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "hill/complexfn.hpp"
#include "hill/errors.hpp"
#include "hill/ode.hpp"
#include "hill/potential.hpp"

namespace hill {

using ldcplx = std::complex<long double>;

struct FloquetData {
    cplx lambda{};
    cplx u2pi{}, v2pi{}, du2pi{}, dv2pi{};
    cplx delta{};
    cplx rho1{}, rho2{};
    // |u dv - v du - 1| measured in the integrator's working precision with
    // compensated products, i.e. the actual drift of det S before the
    // entries are narrowed to double.
    double det_residual = 0.0;
};

struct SolutionTrace {
    std::vector<double> xs;
    std::vector<cplx> u, du, v, dv;
    std::vector<double> wronskian_residual;  // per sample, see FloquetData
};

// Lambda-derivatives of the monodromy entries.
struct VariationalData {
    FloquetData fd;
    cplx du2pi_dl{}, ddu2pi_dl{}, dv2pi_dl{}, ddv2pi_dl{};
    cplx ddelta_dl{};
};

namespace detail {

inline void check_tol(double tol) {
    if (!(tol >= 1e-14 && tol <= 1e-6))
        throw Error(ErrorCode::bad_argument,
                    "integration tol must lie in [1e-14, 1e-6]");
}

inline long double step_tol(double tol) {
    return std::max<long double>(1e-3L * (long double)tol, 1e-18L);
}

inline cplx narrow(ldcplx z) { return {double(z.real()), double(z.imag())}; }

// Neumaier accumulator with exact fma products, long double throughout.
struct LdAccum {
    long double hi = 0.0L, lo = 0.0L;
    void add(long double x) {
        const long double s = hi + x;
        const long double b = s - hi;
        lo += (hi - (s - b)) + (x - b);
        hi = s;
    }
    void add_product(long double a, long double b) {
        const long double p = a * b;
        add(p);
        add(std::fmal(a, b, -p));
    }
    long double value() const { return hi + lo; }
};

// |u dv - v du - 1| with compensated products; measurable down to about
// eps_ld^2 * |u||dv|.
inline double wronskian_drift(ldcplx u, ldcplx dv, ldcplx v, ldcplx du) {
    LdAccum re, im;
    re.add_product(u.real(), dv.real());
    re.add_product(-u.imag(), dv.imag());
    re.add_product(-v.real(), du.real());
    re.add_product(v.imag(), du.imag());
    re.add(-1.0L);
    im.add_product(u.real(), dv.imag());
    im.add_product(u.imag(), dv.real());
    im.add_product(-v.real(), du.imag());
    im.add_product(-v.imag(), du.real());
    const long double r = re.value(), i = im.value();
    return double(std::sqrt(r * r + i * i));
}

}  // namespace detail

// Fills delta and the multipliers from the four matrix entries.  rho1 is
// the root of rho^2 - Delta rho + 1 with |rho1| >= 1; at an exact tie the
// branch with nonnegative imaginary part of sqrt(Delta^2 - 4) is taken.
inline FloquetData make_floquet(cplx lambda, cplx u2pi, cplx v2pi, cplx du2pi,
                                cplx dv2pi) {
    FloquetData fd;
    fd.lambda = lambda;
    fd.u2pi = u2pi;
    fd.v2pi = v2pi;
    fd.du2pi = du2pi;
    fd.dv2pi = dv2pi;
    fd.delta = u2pi + dv2pi;
    cplx s = std::sqrt(fd.delta * fd.delta - 4.0);
    const double plus = std::abs(fd.delta + s), minus = std::abs(fd.delta - s);
    if (plus < minus)
        s = -s;
    else if (plus == minus && s.imag() < 0.0)
        s = -s;
    fd.rho1 = 0.5 * (fd.delta + s);
    fd.rho2 = (fd.rho1 == cplx(0.0)) ? cplx(0.0) : 1.0 / fd.rho1;
    return fd;
}

// u, v with u(0)=1, u'(0)=0, v(0)=0, v'(0)=1, sampled along the adaptive
// steps of the integrator.
inline SolutionTrace fundamental_system(const Potential& p, cplx lambda,
                                        double tol) {
    detail::check_tol(tol);
    const long double st = detail::step_tol(tol);
    const ldcplx lam(lambda.real(), lambda.imag());
    SolutionTrace trace;
    auto rhs = [&p, lam](long double x, const CVecT<4, long double>& y,
                         CVecT<4, long double>& dy) {
        const cplx q = p.evaluate(double(x));
        const ldcplx w = ldcplx(q.real(), q.imag()) - lam;
        dy[0] = y[1];
        dy[1] = w * y[0];
        dy[2] = y[3];
        dy[3] = w * y[2];
    };
    CVecT<4, long double> y0{ldcplx(1), ldcplx(0), ldcplx(0), ldcplx(1)};
    integrate_dopri5<4, long double>(
        rhs, y0, 0.0L, (long double)two_pi, st, st,
        [&trace](long double x, const CVecT<4, long double>& y) {
            trace.xs.push_back(double(x));
            trace.u.push_back(detail::narrow(y[0]));
            trace.du.push_back(detail::narrow(y[1]));
            trace.v.push_back(detail::narrow(y[2]));
            trace.dv.push_back(detail::narrow(y[3]));
            trace.wronskian_residual.push_back(
                detail::wronskian_drift(y[0], y[3], y[2], y[1]));
        });
    return trace;
}

inline FloquetData floquet_data(const Potential& p, cplx lambda, double tol) {
    detail::check_tol(tol);
    const long double st = detail::step_tol(tol);
    const ldcplx lam(lambda.real(), lambda.imag());
    auto rhs = [&p, lam](long double x, const CVecT<4, long double>& y,
                         CVecT<4, long double>& dy) {
        const cplx q = p.evaluate(double(x));
        const ldcplx w = ldcplx(q.real(), q.imag()) - lam;
        dy[0] = y[1];
        dy[1] = w * y[0];
        dy[2] = y[3];
        dy[3] = w * y[2];
    };
    CVecT<4, long double> y0{ldcplx(1), ldcplx(0), ldcplx(0), ldcplx(1)};
    const auto y = integrate_dopri5<4, long double>(rhs, y0, 0.0L,
                                                    (long double)two_pi, st, st);
    FloquetData fd =
        make_floquet(lambda, detail::narrow(y[0]), detail::narrow(y[2]),
                     detail::narrow(y[1]), detail::narrow(y[3]));
    fd.det_residual = detail::wronskian_drift(y[0], y[3], y[2], y[1]);
    return fd;
}

inline cplx discriminant(const Potential& p, cplx lambda, double tol) {
    return floquet_data(p, lambda, tol).delta;
}

// D(k) = Delta(k^2); even in k by construction.
inline cplx discriminant_k(const Potential& p, cplx k, double tol) {
    return discriminant(p, k * k, tol);
}

// Delta'(lambda) through the variation-of-parameters identity
//   Delta' = u(2pi) I_uv - v(2pi) I_uu + u'(2pi) I_vv - v'(2pi) I_uv
// with the three quadratures carried as extra components of the solve.
inline cplx discriminant_derivative(const Potential& p, cplx lambda,
                                    double tol) {
    detail::check_tol(tol);
    const long double st = detail::step_tol(tol);
    const ldcplx lam(lambda.real(), lambda.imag());
    auto rhs = [&p, lam](long double x, const CVecT<7, long double>& y,
                         CVecT<7, long double>& dy) {
        const cplx q = p.evaluate(double(x));
        const ldcplx w = ldcplx(q.real(), q.imag()) - lam;
        dy[0] = y[1];
        dy[1] = w * y[0];
        dy[2] = y[3];
        dy[3] = w * y[2];
        dy[4] = y[0] * y[0];
        dy[5] = y[2] * y[2];
        dy[6] = y[0] * y[2];
    };
    CVecT<7, long double> y0{ldcplx(1), ldcplx(0), ldcplx(0), ldcplx(1),
                             ldcplx(0), ldcplx(0), ldcplx(0)};
    const auto y = integrate_dopri5<7, long double>(rhs, y0, 0.0L,
                                                    (long double)two_pi, st, st);
    return detail::narrow(y[0] * y[6] - y[2] * y[4] + y[1] * y[5] -
                          y[3] * y[6]);
}

// Monodromy entries together with their lambda-derivatives, from the
// variational system (d/dlambda y)'' = (q - lambda) (d/dlambda y) - y.
inline VariationalData variational_data(const Potential& p, cplx lambda,
                                        double tol) {
    detail::check_tol(tol);
    const long double st = detail::step_tol(tol);
    const ldcplx lam(lambda.real(), lambda.imag());
    auto rhs = [&p, lam](long double x, const CVecT<8, long double>& y,
                         CVecT<8, long double>& dy) {
        const cplx q = p.evaluate(double(x));
        const ldcplx w = ldcplx(q.real(), q.imag()) - lam;
        dy[0] = y[1];
        dy[1] = w * y[0];
        dy[2] = y[3];
        dy[3] = w * y[2];
        dy[4] = y[5];
        dy[5] = w * y[4] - y[0];
        dy[6] = y[7];
        dy[7] = w * y[6] - y[2];
    };
    CVecT<8, long double> y0{ldcplx(1), ldcplx(0), ldcplx(0), ldcplx(1),
                             ldcplx(0), ldcplx(0), ldcplx(0), ldcplx(0)};
    const auto y = integrate_dopri5<8, long double>(rhs, y0, 0.0L,
                                                    (long double)two_pi, st, st);
    VariationalData vd;
    vd.fd = make_floquet(lambda, detail::narrow(y[0]), detail::narrow(y[2]),
                         detail::narrow(y[1]), detail::narrow(y[3]));
    vd.fd.det_residual = detail::wronskian_drift(y[0], y[3], y[2], y[1]);
    vd.du2pi_dl = detail::narrow(y[4]);
    vd.ddu2pi_dl = detail::narrow(y[5]);
    vd.dv2pi_dl = detail::narrow(y[6]);
    vd.ddv2pi_dl = detail::narrow(y[7]);
    vd.ddelta_dl = detail::narrow(y[4] + y[7]);
    return vd;
}

// Per-potential evaluation cache.  Root finders and arc tracers revisit
// nearby lambda; keys are exact (lambda, tol) pairs.  Insertion is guarded
// by a mutex so grids may be evaluated concurrently.
class MonodromyEngine {
public:
    explicit MonodromyEngine(Potential p) : p_(std::move(p)) {}

    const Potential& potential() const { return p_; }

    FloquetData floquet(cplx lambda, double tol) const {
        const Key key{lambda.real(), lambda.imag(), tol};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        FloquetData fd = floquet_data(p_, lambda, tol);
        std::lock_guard<std::mutex> lock(mu_);
        cache_.emplace(key, fd);
        return fd;
    }

    VariationalData variational(cplx lambda, double tol) const {
        const Key key{lambda.real(), lambda.imag(), tol};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = vcache_.find(key);
            if (it != vcache_.end()) return it->second;
        }
        VariationalData vd = variational_data(p_, lambda, tol);
        std::lock_guard<std::mutex> lock(mu_);
        vcache_.emplace(key, vd);
        return vd;
    }

    cplx delta(cplx lambda, double tol) const {
        return floquet(lambda, tol).delta;
    }

private:
    struct Key {
        double re, im, tol;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::hash<double> h;
            std::size_t s = h(k.re);
            s ^= h(k.im) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
            s ^= h(k.tol) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
            return s;
        }
    };

    Potential p_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Key, FloquetData, KeyHash> cache_;
    mutable std::unordered_map<Key, VariationalData, KeyHash> vcache_;
};

}  // namespace hill

#endif
